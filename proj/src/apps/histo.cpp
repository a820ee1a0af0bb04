#include "skewsim/apps/histo.hpp"

#include <string>

namespace skewsim {

HistoApp::HistoApp(std::uint32_t num_bins, std::uint32_t m, HashFn hash) : num_bins_(num_bins), m_(m), hash_(hash) {
    if (m == 0 || num_bins == 0 || num_bins % m != 0) {
        throw ConfigError("histo: num_bins (" + std::to_string(num_bins) + ") must be a positive multiple of M (" +
                          std::to_string(m) + ")");
    }
}

HistoApp::State HistoApp::make_state(std::uint32_t) const { return {std::vector<std::uint64_t>(num_bins_ / m_, 0)}; }

void HistoApp::combine(State& into, State&& from) const {
    for (std::size_t i = 0; i < into.bins.size(); ++i) into.bins[i] += from.bins[i];
}

HistoApp::Result HistoApp::finalize(std::vector<State> ranges) const {
    Result bins(num_bins_, 0);
    for (std::uint32_t r = 0; r < ranges.size(); ++r) {
        for (std::size_t local = 0; local < ranges[r].bins.size(); ++local) bins[local * m_ + r] = ranges[r].bins[local];
    }
    return bins;
}

}  // namespace skewsim
