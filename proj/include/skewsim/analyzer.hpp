#pragma once

#include "skewsim/types.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace skewsim {

struct PipelineShape {
    std::uint32_t n_prepe = 0;
    std::uint32_t m_pripe = 0;
    friend bool operator==(const PipelineShape&, const PipelineShape&) = default;
};

/// PE counts that keep the pipeline balanced against the memory interface:
/// N = ii_prepe * w_mem / w_tuple, M = ii_pripe * w_mem / w_tuple.
PipelineShape pe_counts(std::uint32_t ii_prepe, std::uint32_t ii_pripe, std::uint32_t w_mem, std::uint32_t w_tuple);

/// Secondary count for per-primary workloads with tolerance t in (0, 1):
/// sum_i ceil(|m * w_i / W - t|) - m, clamped to [0, m - 1].
std::uint32_t secpe_count_from_loads(std::span<const std::uint64_t> loads, double t);

/// Buckets sampled destinations by primary and applies the rule above.
std::uint32_t select_secpe_count(std::span<const std::uint32_t> destinations, std::uint32_t m, double t);

/// Distinct-data capacity left when x secondaries replicate primary ranges:
/// floor(m / (m + x) * c).
std::uint64_t bram_capacity(std::uint32_t m, std::uint32_t x, std::uint64_t c);

struct AnalyzerParams {
    double tolerance = 0.01;
    double sample_fraction = 0.001;
    std::uint64_t sample_count = 25'600;
    std::uint64_t seed = 0;
};

/// Reservoir sample without replacement, in stream order of selection.
/// Size is min(n, max(sample_count, ceil(sample_fraction * n))).
std::vector<TupleRecord> sample_dataset(std::span<const TupleRecord> data, const AnalyzerParams& params);
std::uint64_t sample_size(std::uint64_t n, const AnalyzerParams& params);

enum class SelectionMode { offline, online };

struct Selection {
    std::uint32_t x_secpe = 0;
    std::uint64_t capacity = 0;
    std::vector<std::uint64_t> histogram;  // sampled tuples per primary (empty when online)
};

/// offline: sample, route the sample through `destination`, pick X.
/// online: X = m - 1.
Selection select_implementation(std::span<const TupleRecord> data,
                                const std::function<std::uint32_t(const TupleRecord&)>& destination,
                                std::uint32_t m, std::uint64_t c, SelectionMode mode,
                                const AnalyzerParams& params = {});

}  // namespace skewsim
