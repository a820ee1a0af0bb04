#include "skewsim/apps/hhd.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace skewsim {

HhdApp::HhdApp(std::uint32_t rows, std::uint32_t cols, double phi, std::uint32_t m, std::uint32_t seed,
               std::uint64_t candidate_threshold)
    : rows_(rows), cols_(cols), phi_(phi), m_(m), seed_(seed), candidate_threshold_(candidate_threshold) {
    if (rows == 0 || cols == 0) throw ConfigError("hhd: sketch needs at least one row and one column");
    if (!(phi > 0.0 && phi <= 1.0)) throw ConfigError("hhd: heavy threshold phi must lie in (0, 1]");
    if (m == 0) throw ConfigError("hhd: M must be at least 1");
    if (candidate_threshold == 0) throw ConfigError("hhd: candidate_threshold must be at least 1");
}

HhdApp::State HhdApp::make_state(std::uint32_t) const {
    return {std::vector<std::uint64_t>(std::size_t{rows_} * cols_, 0), {}};
}

std::uint64_t HhdApp::sketch_estimate(const std::vector<std::uint64_t>& sketch, std::uint64_t key) const {
    auto est = std::numeric_limits<std::uint64_t>::max();
    for (std::uint32_t row = 0; row < rows_; ++row) est = std::min(est, sketch[cell(row, key)]);
    return est;
}

void HhdApp::process(State& s, const Payload& p) const {
    auto est = std::numeric_limits<std::uint64_t>::max();
    for (std::uint32_t row = 0; row < rows_; ++row) {
        auto& c = s.sketch[cell(row, p.index)];
        c += p.value;
        est = std::min(est, c);
    }
    if (est >= candidate_threshold_) s.candidates.insert(p.index);
}

void HhdApp::combine(State& into, State&& from) const {
    for (std::size_t i = 0; i < into.sketch.size(); ++i) into.sketch[i] += from.sketch[i];
    into.candidates.merge(from.candidates);
}

HhdApp::Result HhdApp::finalize(std::vector<State> ranges) const {
    Result out;
    for (auto& r : ranges) {
        out.total += std::accumulate(r.sketch.begin(), r.sketch.begin() + cols_, std::uint64_t{0});
        out.candidates.insert(out.candidates.end(), r.candidates.begin(), r.candidates.end());
    }
    std::sort(out.candidates.begin(), out.candidates.end());

    const double cut = phi_ * static_cast<double>(out.total);
    for (auto key : out.candidates) {
        const auto est = sketch_estimate(ranges[owner(key)].sketch, key);
        if (static_cast<double>(est) >= cut) out.heavy.push_back({key, est});
    }
    out.sketches.reserve(ranges.size());
    for (auto& r : ranges) out.sketches.push_back(std::move(r.sketch));
    return out;
}

std::uint64_t HhdApp::estimate(const Result& result, std::uint64_t key) const {
    return sketch_estimate(result.sketches.at(owner(key)), key);
}

}  // namespace skewsim
