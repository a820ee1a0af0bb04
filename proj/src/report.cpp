#include "skewsim/report.hpp"

#include "skewsim/apps/application.hpp"
#include "skewsim/apps/dp.hpp"
#include "skewsim/apps/hhd.hpp"
#include "skewsim/apps/histo.hpp"
#include "skewsim/apps/hll.hpp"
#include "skewsim/apps/pagerank.hpp"
#include "skewsim/datagen.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

namespace skewsim {

namespace {

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

template <class T>
T parse_field(const std::string& text, std::size_t line, const char* name) {
    std::istringstream in(text);
    T value{};
    if (!(in >> value) || !in.eof()) {
        throw DataError("csv line " + std::to_string(line) + ": bad " + name + " '" + text + "'");
    }
    return value;
}

AppRunSummary summarize(const SimMetrics& m) {
    AppRunSummary s;
    s.cycles = m.total_cycles;
    s.tuples = m.input_tuples;
    s.throughput = m.throughput;
    s.stalls = m.stall_cycles;
    s.reschedules = m.reschedule_events.size();
    return s;
}

template <class App, class Same>
AppRunSummary run_and_check(const ArchConfig& cfg, std::span<const TupleRecord> data, const App& app, bool verify,
                            Same same) {
    auto outcome = run_simulation(cfg, data, app);
    auto s = summarize(outcome.metrics);
    if (verify) s.matches_reference = same(outcome.result, reference_run(app, data));
    return s;
}

std::uint32_t pr_vertices(std::span<const TupleRecord> edges, const AppOptions& opts) {
    const auto v = opts.pr_vertices ? opts.pr_vertices : std::max<std::uint64_t>(1, vertex_count(edges));
    if (v > 0xffffffffULL) throw ConfigError("pagerank: too many vertices");
    return static_cast<std::uint32_t>(v);
}

}  // namespace

std::string format_row(const RunRecord& r) {
    std::ostringstream os;
    os << r.app << ',' << fmt_double(r.alpha) << ',' << r.m << ',' << r.x << ',' << r.seed << ',' << r.cycles << ','
       << r.tuples << ',' << fmt_double(r.throughput) << ',' << r.stalls << ',' << r.reschedules;
    return os.str();
}

std::vector<RunRecord> parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw DataError("csv line 1: expected header '" + std::string(kCsvHeader) + "'");
    }
    std::vector<RunRecord> out;
    for (std::size_t lineno = 2; std::getline(in, line); ++lineno) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::istringstream fields(line);
        for (std::string cell; std::getline(fields, cell, ',');) f.push_back(cell);
        if (f.size() != 10) throw DataError("csv line " + std::to_string(lineno) + ": expected 10 fields");
        RunRecord r;
        r.app = f[0];
        r.alpha = parse_field<double>(f[1], lineno, "alpha");
        r.m = parse_field<std::uint32_t>(f[2], lineno, "m");
        r.x = parse_field<std::uint32_t>(f[3], lineno, "x");
        r.seed = parse_field<std::uint64_t>(f[4], lineno, "seed");
        r.cycles = parse_field<std::uint64_t>(f[5], lineno, "cycles");
        r.tuples = parse_field<std::uint64_t>(f[6], lineno, "tuples");
        r.throughput = parse_field<double>(f[7], lineno, "throughput");
        r.stalls = parse_field<std::uint64_t>(f[8], lineno, "stalls");
        r.reschedules = parse_field<std::uint64_t>(f[9], lineno, "reschedules");
        out.push_back(std::move(r));
    }
    return out;
}

AppKind parse_app(std::string_view name) {
    if (name == "histo") return AppKind::histo;
    if (name == "dp") return AppKind::dp;
    if (name == "pr") return AppKind::pr;
    if (name == "hll") return AppKind::hll;
    if (name == "hhd") return AppKind::hhd;
    throw ConfigError("unknown app '" + std::string(name) + "' (expected histo|dp|pr|hll|hhd)");
}

std::string_view app_name(AppKind kind) {
    switch (kind) {
        case AppKind::histo: return "histo";
        case AppKind::dp: return "dp";
        case AppKind::pr: return "pr";
        case AppKind::hll: return "hll";
        case AppKind::hhd: return "hhd";
    }
    return "?";
}

AppRunSummary run_app(AppKind kind, const ArchConfig& cfg, std::span<const TupleRecord> data,
                      const AppOptions& opts, bool verify) {
    const auto m = cfg.m_pripe;
    const auto equal = [](const auto& a, const auto& b) { return a == b; };
    switch (kind) {
        case AppKind::histo:
            return run_and_check(cfg, data, HistoApp(opts.histo_bins_per_pe * m, m), verify, equal);
        case AppKind::dp:
            return run_and_check(cfg, data, DpApp(opts.dp_fanout_per_pe * m, m, opts.dp_buffer_line), verify,
                                 [](const auto& a, const auto& b) { return same_partitions(a, b); });
        case AppKind::hll:
            return run_and_check(cfg, data, HllApp(opts.hll_index_bits, m, static_cast<std::uint32_t>(opts.hash_seed)),
                                 verify, [](const auto& a, const auto& b) { return a.registers == b.registers; });
        case AppKind::hhd:
            return run_and_check(cfg, data,
                                 HhdApp(opts.hhd_rows, opts.hhd_cols, opts.hhd_phi, m,
                                        static_cast<std::uint32_t>(opts.hash_seed)),
                                 verify, [](const auto& a, const auto& b) {
                                     return a.sketches == b.sketches && a.candidates == b.candidates &&
                                            a.heavy == b.heavy;
                                 });
        case AppKind::pr: {
            PageRankParams params;
            params.vertices = pr_vertices(data, opts);
            params.damping = opts.pr_damping;
            params.iterations = opts.pr_iterations;
            const PageRank pr(params, data);
            const auto run = simulate_pagerank(cfg, pr);
            AppRunSummary s;
            for (const auto& pass : run.passes) {
                s.cycles += pass.total_cycles;
                s.tuples += pass.input_tuples;
                s.stalls += pass.stall_cycles;
                s.reschedules += pass.reschedule_events.size();
            }
            s.throughput = s.cycles ? static_cast<double>(s.tuples) / static_cast<double>(s.cycles) : 0.0;
            if (verify) s.matches_reference = run.ranks == pagerank_reference(pr, m);
            return s;
        }
    }
    throw ConfigError("unknown app");
}

std::function<std::uint32_t(const TupleRecord&)> app_destination(AppKind kind, std::uint32_t m,
                                                                 const AppOptions& opts) {
    const auto wrap = [](auto app) {
        auto shared = std::make_shared<decltype(app)>(std::move(app));
        return [shared](const TupleRecord& t) { return shared->prepare(t).dst; };
    };
    switch (kind) {
        case AppKind::histo: return wrap(HistoApp(opts.histo_bins_per_pe * m, m));
        case AppKind::dp: return wrap(DpApp(opts.dp_fanout_per_pe * m, m, opts.dp_buffer_line));
        case AppKind::hll: return wrap(HllApp(opts.hll_index_bits, m, static_cast<std::uint32_t>(opts.hash_seed)));
        case AppKind::hhd:
            return wrap(HhdApp(opts.hhd_rows, opts.hhd_cols, opts.hhd_phi, m,
                               static_cast<std::uint32_t>(opts.hash_seed)));
        case AppKind::pr:
            if (m == 0) throw ConfigError("m must be at least 1");
            return [m](const TupleRecord& e) { return static_cast<std::uint32_t>(e.value % m); };
    }
    throw ConfigError("unknown app");
}

std::vector<TupleRecord> sweep_dataset(AppKind kind, std::uint64_t n, double alpha, std::uint64_t domain,
                                       std::uint64_t seed) {
    if (kind == AppKind::pr) {
        if (domain == 0 || domain > 0xffffffffULL) throw ConfigError("pr: vertex count out of range");
        const double degree = static_cast<double>(n) / static_cast<double>(domain);
        return gen_graph(static_cast<std::uint32_t>(domain), degree, alpha, seed);
    }
    return gen_zipf(n, alpha, domain, seed);
}

unsigned sweep_threads() {
    if (const char* env = std::getenv("SKEWSIM_THREADS"); env && *env) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<RunRecord> run_sweep(const SweepSpec& spec, unsigned threads) {
    struct Entry {
        AppKind app;
        double alpha;
        std::uint32_t m;
        std::uint32_t x;
        std::uint64_t seed;
    };
    std::vector<Entry> entries;
    for (auto app : spec.apps)
        for (auto alpha : spec.alphas)
            for (auto m : spec.ms)
                for (auto x : spec.xs)
                    for (auto seed : spec.seeds) entries.push_back({app, alpha, m, x, seed});

    // Datasets depend only on (graph or tuples, alpha, seed); build each once.
    using DataKey = std::tuple<bool, double, std::uint64_t>;
    std::map<DataKey, std::vector<TupleRecord>> datasets;
    for (const auto& e : entries) {
        const DataKey key{e.app == AppKind::pr, e.alpha, e.seed};
        if (!datasets.count(key)) datasets[key] = sweep_dataset(e.app, spec.tuples, e.alpha, spec.domain, e.seed);
    }

    std::vector<RunRecord> rows(entries.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto worker = [&] {
        for (;;) {
            const auto i = next.fetch_add(1);
            if (i >= entries.size()) return;
            const auto& e = entries[i];
            try {
                auto cfg = spec.base;
                cfg.m_pripe = e.m;
                cfg.x_secpe = e.x;
                cfg.seed = e.seed;
                const auto& data = datasets.at(DataKey{e.app == AppKind::pr, e.alpha, e.seed});
                const auto s = run_app(e.app, cfg, data, spec.options, spec.verify);
                if (!s.matches_reference) {
                    throw InvariantViolation("sweep entry " + std::string(app_name(e.app)) + " alpha=" +
                                             fmt_double(e.alpha) + " m=" + std::to_string(e.m) + " x=" +
                                             std::to_string(e.x) + " differs from the reference result");
                }
                rows[i] = {std::string(app_name(e.app)), e.alpha, e.m, e.x, e.seed, s.cycles, s.tuples,
                           s.throughput, s.stalls, s.reschedules};
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(entries.size());
                return;
            }
        }
    };
    const auto n_threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(entries.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return rows;
}

std::vector<std::vector<double>> workload_heatmap(AppKind kind, std::span<const double> alphas, std::uint32_t m,
                                                  std::uint64_t n, std::uint64_t domain, std::uint64_t seed,
                                                  const AppOptions& opts) {
    const auto dst = app_destination(kind, m, opts);
    const auto loads = [&](double alpha) {
        std::vector<std::uint64_t> counts(m, 0);
        for (const auto& t : sweep_dataset(kind, n, alpha, domain, seed)) ++counts[dst(t)];
        return counts;
    };
    const auto baseline = loads(0.0);
    std::vector<std::vector<double>> out;
    for (auto alpha : alphas) {
        const auto counts = loads(alpha);
        std::vector<double> row(m);
        for (std::uint32_t pe = 0; pe < m; ++pe) {
            row[pe] = static_cast<double>(counts[pe]) / static_cast<double>(std::max<std::uint64_t>(1, baseline[pe]));
        }
        out.push_back(std::move(row));
    }
    return out;
}

void write_heatmap_csv(std::ostream& out, std::span<const double> alphas,
                       const std::vector<std::vector<double>>& matrix) {
    out << "alpha";
    if (!matrix.empty()) {
        for (std::size_t pe = 0; pe < matrix.front().size(); ++pe) out << ",pe" << pe;
    }
    out << '\n';
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        out << fmt_double(alphas[i]);
        for (auto v : matrix[i]) out << ',' << fmt_double(v);
        out << '\n';
    }
}

std::vector<SpeedupRow> speedups(std::span<const RunRecord> records) {
    using Key = std::tuple<std::string, double, std::uint32_t, std::uint64_t>;
    std::map<Key, double> base;
    for (const auto& r : records) {
        if (r.x == 0) base[Key{r.app, r.alpha, r.m, r.seed}] = r.throughput;
    }
    std::vector<SpeedupRow> out;
    for (const auto& r : records) {
        const auto it = base.find(Key{r.app, r.alpha, r.m, r.seed});
        if (it == base.end() || it->second <= 0.0) continue;
        out.push_back({r, r.throughput / it->second});
    }
    return out;
}

void write_speedup_csv(std::ostream& out, std::span<const SpeedupRow> rows) {
    out << "app,alpha,m,x,seed,throughput,speedup\n";
    for (const auto& row : rows) {
        const auto& r = row.run;
        out << r.app << ',' << fmt_double(r.alpha) << ',' << r.m << ',' << r.x << ',' << r.seed << ','
            << fmt_double(r.throughput) << ',' << fmt_double(row.speedup) << '\n';
    }
}

}  // namespace skewsim
