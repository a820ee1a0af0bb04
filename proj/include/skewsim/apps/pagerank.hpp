#pragma once

#include "skewsim/apps/application.hpp"
#include "skewsim/config.hpp"
#include "skewsim/engine.hpp"
#include "skewsim/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace skewsim {

struct PageRankParams {
    std::uint32_t vertices = 1;
    double damping = 0.85;
    std::uint32_t iterations = 1;
    std::uint32_t frac_bits = 32;  // ranks are unsigned fixed point with this many fraction bits
};

/// One scatter pass over an edge stream (key = src, value = dst). The
/// destination vertex selects the PE; each PE accumulates src's rank share
/// into its vertex slots.
class PageRankScatter {
public:
    struct State {
        std::vector<std::uint64_t> accum;  // local index = vertex / M
    };
    using Result = std::vector<std::uint64_t>;  // accumulated share per vertex

    PageRankScatter(std::uint32_t vertices, std::uint32_t m, std::span<const std::uint64_t> shares);

    std::uint32_t primaries() const { return m_; }
    std::uint64_t buffer_entries() const { return vertices_; }

    Prepared prepare(const TupleRecord& edge) const {
        return {static_cast<std::uint32_t>(edge.value % m_), {edge.value, shares_[edge.key]}};
    }
    State make_state(std::uint32_t range) const;
    void process(State& s, const Payload& p) const { s.accum[p.index / m_] += p.value; }
    void combine(State& into, State&& from) const;
    Result finalize(std::vector<State> ranges) const;

private:
    std::uint32_t vertices_;
    std::uint32_t m_;
    std::span<const std::uint64_t> shares_;
};

/// Fixed-point PageRank driven as repeated scatter passes.
class PageRank {
public:
    /// Throws ConfigError naming the first edge that references a vertex >= V.
    PageRank(const PageRankParams& params, std::span<const TupleRecord> edges);

    const PageRankParams& params() const { return params_; }
    std::span<const TupleRecord> edges() const { return edges_; }
    std::uint64_t one() const { return std::uint64_t{1} << params_.frac_bits; }
    const std::vector<std::uint32_t>& out_degree() const { return out_degree_; }

    std::vector<std::uint64_t> initial_ranks() const;
    /// rank(v) / outdeg(v), zero for vertices without out-edges.
    std::vector<std::uint64_t> shares(std::span<const std::uint64_t> ranks) const;
    /// (1 - d) / V + d * accum, all in fixed point.
    std::vector<std::uint64_t> apply(std::span<const std::uint64_t> accum) const;

private:
    PageRankParams params_;
    std::span<const TupleRecord> edges_;
    std::vector<std::uint32_t> out_degree_;
    std::uint64_t damping_fp_;
};

struct PageRankRun {
    std::vector<std::uint64_t> ranks;
    std::vector<SimMetrics> passes;  // one per iteration

    std::uint64_t total_cycles() const;
};

PageRankRun simulate_pagerank(const ArchConfig& cfg, const PageRank& pr);

/// Same iterations with reference_run in place of the simulator.
std::vector<std::uint64_t> pagerank_reference(const PageRank& pr, std::uint32_t m);

}  // namespace skewsim
