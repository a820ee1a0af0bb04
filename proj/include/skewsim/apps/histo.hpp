#pragma once

#include "skewsim/types.hpp"

#include <cstdint>
#include <vector>

namespace skewsim {

inline std::uint64_t identity_hash(std::uint64_t key) { return key; }

/// Histogram building. bin = hash(key) mod num_bins; bins are range
/// partitioned by their low part, bin mod M, so with the identity hash and
/// M = 16 the destination is key & 0xf.
class HistoApp {
public:
    using HashFn = std::uint64_t (*)(std::uint64_t);

    struct State {
        std::vector<std::uint64_t> bins;  // local index = bin / M
    };
    using Result = std::vector<std::uint64_t>;

    HistoApp(std::uint32_t num_bins, std::uint32_t m, HashFn hash = identity_hash);

    std::uint32_t primaries() const { return m_; }
    std::uint32_t num_bins() const { return num_bins_; }
    std::uint64_t buffer_entries() const { return num_bins_; }

    Prepared prepare(const TupleRecord& t) const {
        const auto bin = hash_(t.key) % num_bins_;
        return {static_cast<std::uint32_t>(bin % m_), {bin, 1}};
    }
    State make_state(std::uint32_t range) const;
    void process(State& s, const Payload& p) const { s.bins[p.index / m_] += p.value; }
    void combine(State& into, State&& from) const;
    Result finalize(std::vector<State> ranges) const;

private:
    std::uint32_t num_bins_;
    std::uint32_t m_;
    HashFn hash_;
};

}  // namespace skewsim
