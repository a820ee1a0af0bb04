#pragma once

#include "skewsim/analyzer.hpp"
#include "skewsim/config.hpp"
#include "skewsim/types.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace skewsim {

inline constexpr std::string_view kCsvHeader = "app,alpha,m,x,seed,cycles,tuples,throughput,stalls,reschedules";

struct RunRecord {
    std::string app;
    double alpha = 0.0;
    std::uint32_t m = 0;
    std::uint32_t x = 0;
    std::uint64_t seed = 0;
    std::uint64_t cycles = 0;
    std::uint64_t tuples = 0;
    double throughput = 0.0;
    std::uint64_t stalls = 0;
    std::uint64_t reschedules = 0;
};

std::string format_row(const RunRecord& r);
/// Expects kCsvHeader on the first line; reports line numbers on errors.
std::vector<RunRecord> parse_csv(std::istream& in);

enum class AppKind { histo, dp, pr, hll, hhd };

AppKind parse_app(std::string_view name);
std::string_view app_name(AppKind kind);

/// Knobs for the application instances built by name.
struct AppOptions {
    std::uint32_t histo_bins_per_pe = 256;
    std::uint32_t dp_fanout_per_pe = 64;
    std::uint32_t dp_buffer_line = 8;
    std::uint32_t hll_index_bits = 14;
    std::uint32_t hhd_rows = 4;
    std::uint32_t hhd_cols = 1024;
    double hhd_phi = 0.1;
    std::uint32_t pr_iterations = 1;
    double pr_damping = 0.85;
    std::uint64_t pr_vertices = 0;  // 0: largest id in the edge list + 1
    std::uint64_t hash_seed = 0;
};

struct AppRunSummary {
    std::uint64_t cycles = 0;
    std::uint64_t tuples = 0;
    double throughput = 0.0;
    std::uint64_t stalls = 0;
    std::uint64_t reschedules = 0;
    bool matches_reference = true;  // only meaningful when verification ran
};

/// Simulates one application over `data` (an edge list for pr). With
/// `verify`, the merged result is also compared against reference_run.
AppRunSummary run_app(AppKind kind, const ArchConfig& cfg, std::span<const TupleRecord> data,
                      const AppOptions& opts = {}, bool verify = false);

/// Primary destination of each tuple under the named application.
std::function<std::uint32_t(const TupleRecord&)> app_destination(AppKind kind, std::uint32_t m,
                                                                 const AppOptions& opts = {});

/// Dataset used by sweeps and reports: a Zipf tuple stream, or for pr a
/// graph on `domain` vertices with n edges and in-degree skew alpha.
std::vector<TupleRecord> sweep_dataset(AppKind kind, std::uint64_t n, double alpha, std::uint64_t domain,
                                       std::uint64_t seed);

struct SweepSpec {
    ArchConfig base;
    AppOptions options;
    std::vector<AppKind> apps{AppKind::histo};
    std::vector<double> alphas{0.0};
    std::vector<std::uint32_t> ms{16};
    std::vector<std::uint32_t> xs{0};
    std::vector<std::uint64_t> seeds{0};
    std::uint64_t tuples = 1 << 20;
    std::uint64_t domain = 1 << 20;
    bool verify = false;
};

/// Worker count for sweeps: SKEWSIM_THREADS if set and positive, otherwise
/// the hardware concurrency.
unsigned sweep_threads();

/// Runs apps x alphas x ms x xs x seeds (in that nesting order) with up to
/// `threads` entries in flight. Rows come back in nesting order.
std::vector<RunRecord> run_sweep(const SweepSpec& spec, unsigned threads);

/// Per-PE workload of each alpha divided by the alpha = 0 workload of the
/// same seed, as rows [alpha][pe].
std::vector<std::vector<double>> workload_heatmap(AppKind kind, std::span<const double> alphas, std::uint32_t m,
                                                  std::uint64_t n, std::uint64_t domain, std::uint64_t seed,
                                                  const AppOptions& opts = {});
void write_heatmap_csv(std::ostream& out, std::span<const double> alphas,
                       const std::vector<std::vector<double>>& matrix);

struct SpeedupRow {
    RunRecord run;
    double speedup = 0.0;  // throughput over the x = 0 run with the same app, alpha, m, seed
};

/// Rows without an x = 0 partner are dropped.
std::vector<SpeedupRow> speedups(std::span<const RunRecord> records);
void write_speedup_csv(std::ostream& out, std::span<const SpeedupRow> rows);

}  // namespace skewsim
