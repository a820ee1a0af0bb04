#pragma once

#include "skewsim/hash.hpp"
#include "skewsim/types.hpp"

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

namespace skewsim {

/// HyperLogLog estimate over a full register array, with the usual
/// linear-counting correction for small cardinalities and the 2^64
/// large-range correction.
double hll_estimate(std::span<const std::uint8_t> registers);

/// HyperLogLog cardinality estimation over keys hashed with 64-bit murmur3.
/// The top b hash bits select the register; registers are range partitioned
/// by register index mod M.
class HllApp {
public:
    struct State {
        std::vector<std::uint8_t> registers;  // local index = register / M
    };
    struct Result {
        std::vector<std::uint8_t> registers;
        double estimate = 0.0;
    };

    HllApp(std::uint32_t index_bits, std::uint32_t m, std::uint32_t seed = 0);

    std::uint32_t primaries() const { return m_; }
    std::uint32_t num_registers() const { return std::uint32_t{1} << bits_; }
    std::uint64_t buffer_entries() const { return num_registers(); }

    Prepared prepare(const TupleRecord& t) const {
        const auto h = murmur3_64(t.key, seed_);
        const auto reg = h >> (64 - bits_);
        const auto rest = h << bits_;
        const auto rank = rest == 0 ? 64 - bits_ + 1 : static_cast<std::uint32_t>(std::countl_zero(rest)) + 1;
        return {static_cast<std::uint32_t>(reg % m_), {reg, rank}};
    }
    State make_state(std::uint32_t range) const;
    void process(State& s, const Payload& p) const {
        auto& r = s.registers[p.index / m_];
        if (p.value > r) r = static_cast<std::uint8_t>(p.value);
    }
    void combine(State& into, State&& from) const;
    Result finalize(std::vector<State> ranges) const;

private:
    std::uint32_t bits_;
    std::uint32_t m_;
    std::uint32_t seed_;
};

}  // namespace skewsim
