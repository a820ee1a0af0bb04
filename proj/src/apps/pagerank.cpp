#include "skewsim/apps/pagerank.hpp"

#include <cmath>
#include <string>

namespace skewsim {

PageRankScatter::PageRankScatter(std::uint32_t vertices, std::uint32_t m, std::span<const std::uint64_t> shares)
    : vertices_(vertices), m_(m), shares_(shares) {
    if (m == 0) throw ConfigError("pagerank: M must be at least 1");
    if (shares.size() != vertices) throw ConfigError("pagerank: share vector does not match vertex count");
}

PageRankScatter::State PageRankScatter::make_state(std::uint32_t) const {
    // Vertex slots are padded up to a multiple of M.
    return {std::vector<std::uint64_t>((vertices_ + m_ - 1) / m_, 0)};
}

void PageRankScatter::combine(State& into, State&& from) const {
    for (std::size_t i = 0; i < into.accum.size(); ++i) into.accum[i] += from.accum[i];
}

PageRankScatter::Result PageRankScatter::finalize(std::vector<State> ranges) const {
    Result out(vertices_, 0);
    for (std::uint32_t r = 0; r < ranges.size(); ++r) {
        for (std::size_t local = 0; local < ranges[r].accum.size(); ++local) {
            const auto v = local * m_ + r;
            if (v < vertices_) out[v] = ranges[r].accum[local];
        }
    }
    return out;
}

PageRank::PageRank(const PageRankParams& params, std::span<const TupleRecord> edges)
    : params_(params), edges_(edges), out_degree_(params.vertices, 0) {
    if (params.vertices == 0) throw ConfigError("pagerank: graph needs at least one vertex");
    if (params.frac_bits == 0 || params.frac_bits > 40) throw ConfigError("pagerank: frac_bits must be in [1, 40]");
    if (!(params.damping >= 0.0 && params.damping <= 1.0)) throw ConfigError("pagerank: damping must lie in [0, 1]");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto& e = edges[i];
        if (e.key >= params.vertices || e.value >= params.vertices) {
            throw ConfigError("pagerank: edge " + std::to_string(i) + " (" + std::to_string(e.key) + " -> " +
                              std::to_string(e.value) + ") references a vertex >= " +
                              std::to_string(params.vertices));
        }
        ++out_degree_[e.key];
    }
    damping_fp_ = static_cast<std::uint64_t>(std::llround(params.damping * static_cast<double>(one())));
}

std::vector<std::uint64_t> PageRank::initial_ranks() const {
    return std::vector<std::uint64_t>(params_.vertices, one() / params_.vertices);
}

std::vector<std::uint64_t> PageRank::shares(std::span<const std::uint64_t> ranks) const {
    std::vector<std::uint64_t> out(params_.vertices, 0);
    for (std::uint32_t v = 0; v < params_.vertices; ++v) {
        if (out_degree_[v] > 0) out[v] = ranks[v] / out_degree_[v];
    }
    return out;
}

std::vector<std::uint64_t> PageRank::apply(std::span<const std::uint64_t> accum) const {
    const auto base = (one() - damping_fp_) / params_.vertices;
    std::vector<std::uint64_t> out(params_.vertices);
    for (std::uint32_t v = 0; v < params_.vertices; ++v) {
        const auto scaled = (static_cast<unsigned __int128>(damping_fp_) * accum[v]) >> params_.frac_bits;
        out[v] = base + static_cast<std::uint64_t>(scaled);
    }
    return out;
}

std::uint64_t PageRankRun::total_cycles() const {
    std::uint64_t total = 0;
    for (const auto& p : passes) total += p.total_cycles;
    return total;
}

PageRankRun simulate_pagerank(const ArchConfig& cfg, const PageRank& pr) {
    PageRankRun run;
    run.ranks = pr.initial_ranks();
    for (std::uint32_t it = 0; it < pr.params().iterations; ++it) {
        const auto shares = pr.shares(run.ranks);
        PageRankScatter pass(pr.params().vertices, cfg.m_pripe, shares);
        auto outcome = run_simulation(cfg, pr.edges(), pass);
        run.ranks = pr.apply(outcome.result);
        run.passes.push_back(std::move(outcome.metrics));
    }
    return run;
}

std::vector<std::uint64_t> pagerank_reference(const PageRank& pr, std::uint32_t m) {
    auto ranks = pr.initial_ranks();
    for (std::uint32_t it = 0; it < pr.params().iterations; ++it) {
        const auto shares = pr.shares(ranks);
        PageRankScatter pass(pr.params().vertices, m, shares);
        ranks = pr.apply(reference_run(pass, pr.edges()));
    }
    return ranks;
}

}  // namespace skewsim
