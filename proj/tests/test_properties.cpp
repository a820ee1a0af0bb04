#include "random_cases.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace skewsim;
using namespace skewsim::testing;

namespace skewsim {
void PrintTo(AppKind kind, std::ostream* os) { *os << app_name(kind); }
}  // namespace skewsim

class OracleEquivalence : public ::testing::TestWithParam<AppKind> {};

TEST_P(OracleEquivalence, RandomCasesMatchReference) {
    std::uint64_t epochs = 0;
    for (std::uint64_t c = 0; c < 60; ++c) {
        const auto out = run_random_case(GetParam(), 1000 + c);
        ASSERT_TRUE(out.matches) << out.description;
        epochs += out.epochs;
    }
    EXPECT_GT(epochs, 0u) << "no rescheduling epoch was exercised";
}

INSTANTIATE_TEST_SUITE_P(Apps, OracleEquivalence,
                         ::testing::Values(AppKind::histo, AppKind::dp, AppKind::pr, AppKind::hll, AppKind::hhd),
                         [](const auto& info) { return std::string(app_name(info.param)); });

TEST(Conservation, EveryTupleProcessedOnce) {
    for (std::uint64_t c = 0; c < 40; ++c) {
        Rng rng(5000 + c);
        const auto cfg = random_config(rng);
        std::string what;
        const auto data = random_tuples(rng, what);
        const HistoApp app(cfg.m_pripe * 4, cfg.m_pripe);
        const auto sim = run_simulation(cfg, data, app);
        std::uint64_t processed = 0;
        for (auto p : sim.metrics.tuples_processed) processed += p;
        ASSERT_EQ(processed, data.size()) << describe(cfg);
        ASSERT_EQ(sim.metrics.tuples_processed.size(), cfg.total_pes());
        ASSERT_LE(sim.metrics.throughput, static_cast<double>(cfg.tuples_per_fetch()) + 1e-9);
    }
}

TEST(Determinism, SameInputsSameMetrics) {
    for (std::uint64_t c = 0; c < 20; ++c) {
        Rng rng_a(9000 + c), rng_b(9000 + c);
        const auto cfg = random_config(rng_a);
        random_config(rng_b);
        std::string what;
        const auto data = random_tuples(rng_a, what);
        const HistoApp app(cfg.m_pripe * 8, cfg.m_pripe);
        const auto a = run_simulation(cfg, data, app).metrics;
        const auto b = run_simulation(cfg, data, app).metrics;
        ASSERT_EQ(a.total_cycles, b.total_cycles);
        ASSERT_EQ(a.tuples_processed, b.tuples_processed);
        ASSERT_EQ(a.stall_cycles, b.stall_cycles);
        ASSERT_EQ(a.reschedule_events.size(), b.reschedule_events.size());
    }
}

TEST(StageOrder, ThroughputNeverExceedsBottleneck) {
    for (std::uint64_t c = 0; c < 30; ++c) {
        Rng rng(7000 + c);
        auto cfg = random_config(rng);
        const auto data = gen_zipf(4000, 0.0, 1 << 12, c);
        const HistoApp app(cfg.m_pripe * 4, cfg.m_pripe);
        const auto m = run_simulation(cfg, data, app).metrics;
        const double prepe_rate = static_cast<double>(cfg.n_prepe) / cfg.ii_prepe;
        const double pe_rate = static_cast<double>(cfg.total_pes()) / cfg.ii_pripe;
        const double bound = std::min({static_cast<double>(cfg.tuples_per_fetch()), prepe_rate, pe_rate,
                                       static_cast<double>(cfg.n_prepe)});
        ASSERT_LE(m.throughput, bound + 1e-9) << describe(cfg);
    }
}
