#include "skewsim/apps/hll.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace skewsim {

double hll_estimate(std::span<const std::uint8_t> registers) {
    const double m = static_cast<double>(registers.size());
    double alpha = 0.7213 / (1.0 + 1.079 / m);
    if (registers.size() == 16) alpha = 0.673;
    else if (registers.size() == 32) alpha = 0.697;
    else if (registers.size() == 64) alpha = 0.709;

    double sum = 0.0;
    std::size_t zeros = 0;
    for (auto r : registers) {
        sum += std::ldexp(1.0, -static_cast<int>(r));
        if (r == 0) ++zeros;
    }
    double estimate = alpha * m * m / sum;
    if (estimate <= 2.5 * m) {
        if (zeros > 0) estimate = m * std::log(m / static_cast<double>(zeros));
    } else {
        constexpr double two64 = 18446744073709551616.0;
        if (estimate > two64 / 30.0) estimate = -two64 * std::log1p(-estimate / two64);
    }
    return estimate;
}

HllApp::HllApp(std::uint32_t index_bits, std::uint32_t m, std::uint32_t seed)
    : bits_(index_bits), m_(m), seed_(seed) {
    if (index_bits < 4 || index_bits > 24) throw ConfigError("hll: register index bits must be in [4, 24]");
    if (m == 0 || num_registers() % m != 0) {
        throw ConfigError("hll: register count " + std::to_string(num_registers()) + " must be a multiple of M (" +
                          std::to_string(m) + ")");
    }
}

HllApp::State HllApp::make_state(std::uint32_t) const { return {std::vector<std::uint8_t>(num_registers() / m_, 0)}; }

void HllApp::combine(State& into, State&& from) const {
    for (std::size_t i = 0; i < into.registers.size(); ++i) {
        into.registers[i] = std::max(into.registers[i], from.registers[i]);
    }
}

HllApp::Result HllApp::finalize(std::vector<State> ranges) const {
    Result out;
    out.registers.assign(num_registers(), 0);
    for (std::uint32_t r = 0; r < ranges.size(); ++r) {
        for (std::size_t local = 0; local < ranges[r].registers.size(); ++local) {
            out.registers[local * m_ + r] = ranges[r].registers[local];
        }
    }
    out.estimate = hll_estimate(out.registers);
    return out;
}

}  // namespace skewsim
