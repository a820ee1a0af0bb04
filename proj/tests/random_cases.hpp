#pragma once

// Randomized (config, dataset, app) cases checked against the single-instance
// reference. Shared by the property tests and the acceptance run.

#include "skewsim/apps/application.hpp"
#include "skewsim/apps/dp.hpp"
#include "skewsim/apps/hhd.hpp"
#include "skewsim/apps/histo.hpp"
#include "skewsim/apps/hll.hpp"
#include "skewsim/apps/pagerank.hpp"
#include "skewsim/datagen.hpp"
#include "skewsim/report.hpp"
#include "skewsim/rng.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace skewsim::testing {

struct CaseOutcome {
    bool matches = false;
    std::uint64_t epochs = 0;
    std::uint64_t tuples = 0;
    std::string description;
};

inline ArchConfig random_config(Rng& rng) {
    ArchConfig cfg;
    cfg.m_pripe = 1u << rng.below(5);  // 1..16
    cfg.x_secpe = static_cast<std::uint32_t>(rng.below(cfg.m_pripe));
    cfg.n_prepe = 1 + static_cast<std::uint32_t>(rng.below(8));
    cfg.w_tuple = 8;
    cfg.w_mem = 8u << rng.below(4);  // 1..8 tuples per beat
    cfg.ii_prepe = 1 + static_cast<std::uint32_t>(rng.below(2));
    cfg.ii_pripe = 1 + static_cast<std::uint32_t>(rng.below(3));
    cfg.channel_depth = rng.below(3) == 0 ? 512 : cfg.n_prepe + static_cast<std::uint32_t>(rng.below(8));
    cfg.profiling_cycles = 1 + static_cast<std::uint32_t>(rng.below(64));
    cfg.monitor_window = 4 + static_cast<std::uint32_t>(rng.below(128));
    const double thresholds[] = {0.0, 0.5, 0.8, 0.95, 1.0};
    cfg.throughput_threshold = thresholds[rng.below(5)];
    cfg.reschedule_overhead = static_cast<std::uint32_t>(rng.below(64));
    cfg.bram_capacity_c = 0;
    return cfg;
}

inline std::vector<TupleRecord> random_tuples(Rng& rng, std::string& what) {
    const auto n = rng.below(6000);
    const auto domain = 1 + rng.below(1 << 14);
    const double alpha = 3.0 * rng.unit();
    const auto seed = rng.next();
    switch (rng.below(4)) {
        case 0: {
            std::vector<std::uint64_t> seeds;
            for (std::uint64_t i = 0, k = 2 + rng.below(3); i < k; ++i) seeds.push_back(rng.next());
            const auto interval = 1 + n / seeds.size();
            what = "evolving n=" + std::to_string(n) + " alpha=" + std::to_string(alpha);
            return gen_evolving(n, alpha, interval, domain, seeds);
        }
        case 1:
            what = "single n=" + std::to_string(n);
            return gen_single_key(n, rng.below(domain));
        default:
            what = "zipf n=" + std::to_string(n) + " alpha=" + std::to_string(alpha) + " domain=" +
                   std::to_string(domain);
            return gen_zipf(n, alpha, domain, seed);
    }
}

inline std::string describe(const ArchConfig& c) {
    std::ostringstream os;
    os << "N=" << c.n_prepe << " M=" << c.m_pripe << " X=" << c.x_secpe << " F=" << c.tuples_per_fetch()
       << " ii=" << c.ii_prepe << '/' << c.ii_pripe << " depth=" << c.channel_depth << " prof=" << c.profiling_cycles
       << " win=" << c.monitor_window << " thr=" << c.throughput_threshold << " ovh=" << c.reschedule_overhead;
    return os.str();
}

template <class App, class Same>
CaseOutcome check_app(const ArchConfig& cfg, const std::vector<TupleRecord>& data, const App& app, Same same) {
    const auto sim = run_simulation(cfg, data, app);
    CaseOutcome out;
    out.matches = same(sim.result, reference_run(app, data));
    out.epochs = sim.metrics.reschedule_events.size();
    out.tuples = data.size();
    return out;
}

inline CaseOutcome run_random_case(AppKind kind, std::uint64_t case_seed) {
    Rng rng(case_seed);
    const auto cfg = random_config(rng);
    const auto m = cfg.m_pripe;
    std::string what;
    CaseOutcome out;
    switch (kind) {
        case AppKind::histo: {
            const auto data = random_tuples(rng, what);
            const HistoApp app(m * (1 + static_cast<std::uint32_t>(rng.below(64))), m);
            out = check_app(cfg, data, app, [](const auto& a, const auto& b) { return a == b; });
            break;
        }
        case AppKind::dp: {
            const auto data = random_tuples(rng, what);
            const DpApp app(m * (1 + static_cast<std::uint32_t>(rng.below(16))), m,
                            1 + static_cast<std::uint32_t>(rng.below(8)));
            out = check_app(cfg, data, app, [](const auto& a, const auto& b) { return same_partitions(a, b); });
            break;
        }
        case AppKind::hll: {
            const auto data = random_tuples(rng, what);
            const HllApp app(4 + static_cast<std::uint32_t>(rng.below(9)), m, static_cast<std::uint32_t>(rng.next()));
            out = check_app(cfg, data, app,
                            [](const auto& a, const auto& b) { return a.registers == b.registers; });
            break;
        }
        case AppKind::hhd: {
            const auto data = random_tuples(rng, what);
            const HhdApp app(1 + static_cast<std::uint32_t>(rng.below(4)), 8 + static_cast<std::uint32_t>(rng.below(64)),
                             0.01 + 0.3 * rng.unit(), m, static_cast<std::uint32_t>(rng.next()));
            out = check_app(cfg, data, app, [](const auto& a, const auto& b) {
                return a.sketches == b.sketches && a.candidates == b.candidates && a.heavy == b.heavy &&
                       a.total == b.total;
            });
            break;
        }
        case AppKind::pr: {
            const auto v = 1 + static_cast<std::uint32_t>(rng.below(300));
            const auto edges = gen_graph(v, 20.0 * rng.unit(), 2.0 * rng.unit(), rng.next());
            what = "graph V=" + std::to_string(v) + " E=" + std::to_string(edges.size());
            const PageRank pr({.vertices = v, .damping = 0.85, .iterations = 1 + static_cast<std::uint32_t>(rng.below(2))},
                              edges);
            const auto run = simulate_pagerank(cfg, pr);
            out.matches = run.ranks == pagerank_reference(pr, m);
            for (const auto& p : run.passes) out.epochs += p.reschedule_events.size();
            out.tuples = edges.size();
            break;
        }
    }
    out.description = std::string(app_name(kind)) + " case " + std::to_string(case_seed) + ": " + describe(cfg) +
                      "; " + what;
    return out;
}

}  // namespace skewsim::testing
