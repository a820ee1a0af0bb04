#include "skewsim/analyzer.hpp"

#include "skewsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace skewsim {

PipelineShape pe_counts(std::uint32_t ii_prepe, std::uint32_t ii_pripe, std::uint32_t w_mem, std::uint32_t w_tuple) {
    if (ii_prepe == 0 || ii_pripe == 0 || w_mem == 0 || w_tuple == 0) {
        throw ConfigError("pe_counts: all parameters must be at least 1");
    }
    if (w_mem % w_tuple != 0) throw ConfigError("pe_counts: w_tuple must divide w_mem");
    const auto per_beat = w_mem / w_tuple;
    return {ii_prepe * per_beat, ii_pripe * per_beat};
}

std::uint32_t secpe_count_from_loads(std::span<const std::uint64_t> loads, double t) {
    if (loads.empty()) throw ConfigError("select_secpe_count: no primaries");
    if (!(t > 0.0 && t < 1.0)) throw ConfigError("select_secpe_count: tolerance must lie in (0, 1)");
    const auto total = std::accumulate(loads.begin(), loads.end(), std::uint64_t{0});
    if (total == 0) throw ConfigError("select_secpe_count: empty sample");
    const auto m = static_cast<std::int64_t>(loads.size());
    std::int64_t sum = 0;
    for (auto w : loads) {
        const double share = static_cast<double>(m) * static_cast<double>(w) / static_cast<double>(total);
        sum += static_cast<std::int64_t>(std::ceil(std::abs(share - t)));
    }
    return static_cast<std::uint32_t>(std::clamp<std::int64_t>(sum - m, 0, m - 1));
}

std::uint32_t select_secpe_count(std::span<const std::uint32_t> destinations, std::uint32_t m, double t) {
    if (destinations.empty()) throw ConfigError("select_secpe_count: empty sample");
    if (m == 0) throw ConfigError("select_secpe_count: m must be at least 1");
    std::vector<std::uint64_t> loads(m, 0);
    for (auto d : destinations) {
        if (d >= m) throw ConfigError("select_secpe_count: destination " + std::to_string(d) + " >= m");
        ++loads[d];
    }
    return secpe_count_from_loads(loads, t);
}

std::uint64_t bram_capacity(std::uint32_t m, std::uint32_t x, std::uint64_t c) {
    if (m == 0 || x >= m) throw ConfigError("bram_capacity: need 0 <= x <= m-1");
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(m) * c / (m + x));
}

std::uint64_t sample_size(std::uint64_t n, const AnalyzerParams& params) {
    const auto by_fraction = static_cast<std::uint64_t>(std::ceil(params.sample_fraction * static_cast<double>(n)));
    return std::min(n, std::max(params.sample_count, by_fraction));
}

std::vector<TupleRecord> sample_dataset(std::span<const TupleRecord> data, const AnalyzerParams& params) {
    const auto k = sample_size(data.size(), params);
    std::vector<TupleRecord> reservoir(data.begin(), data.begin() + static_cast<std::ptrdiff_t>(k));
    if (k == 0) return reservoir;
    Rng rng(params.seed);
    for (std::uint64_t i = k; i < data.size(); ++i) {
        const auto j = rng.below(i + 1);
        if (j < k) reservoir[j] = data[i];
    }
    return reservoir;
}

Selection select_implementation(std::span<const TupleRecord> data,
                                const std::function<std::uint32_t(const TupleRecord&)>& destination,
                                std::uint32_t m, std::uint64_t c, SelectionMode mode, const AnalyzerParams& params) {
    Selection out;
    if (mode == SelectionMode::online) {
        if (m == 0) throw ConfigError("select_implementation: m must be at least 1");
        out.x_secpe = m - 1;
    } else {
        const auto sample = sample_dataset(data, params);
        std::vector<std::uint32_t> dst;
        dst.reserve(sample.size());
        for (const auto& t : sample) dst.push_back(destination(t));
        out.x_secpe = select_secpe_count(dst, m, params.tolerance);
        out.histogram.assign(m, 0);
        for (auto d : dst) ++out.histogram[d];
    }
    out.capacity = bram_capacity(m, out.x_secpe, c);
    return out;
}

}  // namespace skewsim
