#pragma once

#include "skewsim/hash.hpp"
#include "skewsim/types.hpp"

#include <cstdint>
#include <unordered_set>
#include <vector>

namespace skewsim {

/// Heavy hitter detection with count-min sketches.
///
/// Keys are routed by hash, so each key range has one owning primary. Every
/// PE keeps a full rows x cols sketch for the range it serves plus a set of
/// candidate keys (admitted once the local estimate reaches
/// `candidate_threshold`). Buffers of the same range merge by element-wise
/// sketch addition and candidate union. Reported heavy hitters are the
/// candidates whose merged estimate is at least phi * n.
///
/// With candidate_threshold = 1 every key seen is a candidate and the report
/// is exactly {k : estimate(k) >= phi * n}. Larger thresholds bound the
/// candidate sets but a heavy key split thinly across PEs and epochs can be
/// missed.
class HhdApp {
public:
    struct State {
        std::vector<std::uint64_t> sketch;  // rows x cols, row-major
        std::unordered_set<std::uint64_t> candidates;
    };
    struct HeavyHitter {
        std::uint64_t key = 0;
        std::uint64_t estimate = 0;
        friend bool operator==(const HeavyHitter&, const HeavyHitter&) = default;
    };
    struct Result {
        std::vector<std::vector<std::uint64_t>> sketches;  // per range
        std::vector<std::uint64_t> candidates;             // sorted
        std::vector<HeavyHitter> heavy;                    // sorted by key
        std::uint64_t total = 0;
    };

    HhdApp(std::uint32_t rows, std::uint32_t cols, double phi, std::uint32_t m, std::uint32_t seed = 0,
           std::uint64_t candidate_threshold = 1);

    std::uint32_t primaries() const { return m_; }
    std::uint64_t buffer_entries() const { return std::uint64_t{m_} * rows_ * cols_; }
    double phi() const { return phi_; }

    std::uint32_t owner(std::uint64_t key) const { return static_cast<std::uint32_t>(murmur3_64(key, seed_) % m_); }

    Prepared prepare(const TupleRecord& t) const { return {owner(t.key), {t.key, 1}}; }
    State make_state(std::uint32_t range) const;
    void process(State& s, const Payload& p) const;
    void combine(State& into, State&& from) const;
    Result finalize(std::vector<State> ranges) const;

    /// Count-min estimate of `key` from a merged result.
    std::uint64_t estimate(const Result& result, std::uint64_t key) const;

private:
    std::size_t cell(std::uint32_t row, std::uint64_t key) const {
        return std::size_t{row} * cols_ + murmur3_64(key, seed_ + 1 + row) % cols_;
    }
    std::uint64_t sketch_estimate(const std::vector<std::uint64_t>& sketch, std::uint64_t key) const;

    std::uint32_t rows_;
    std::uint32_t cols_;
    double phi_;
    std::uint32_t m_;
    std::uint32_t seed_;
    std::uint64_t candidate_threshold_;
};

}  // namespace skewsim
