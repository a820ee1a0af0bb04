#include "skewsim/profiler.hpp"

#include "skewsim/rng.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <vector>

using namespace skewsim;

namespace {

// count / (1 + helpers) compared exactly: a/b < c/d  <=>  a*d < c*b.
bool less_load(std::uint64_t ca, std::uint64_t ha, std::uint64_t cb, std::uint64_t hb) {
    return static_cast<unsigned __int128>(ca) * (1 + hb) < static_cast<unsigned __int128>(cb) * (1 + ha);
}

std::vector<std::uint64_t> helper_counts(const SchedulingPlan& plan, std::size_t m) {
    std::vector<std::uint64_t> h(m, 0);
    for (auto p : plan.assignments) ++h[p];
    return h;
}

// Index of the row with the largest per-PE load.
std::size_t argmax_load(const std::vector<std::uint64_t>& counts, const std::vector<std::uint64_t>& helpers) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < counts.size(); ++i) {
        if (less_load(counts[best], helpers[best], counts[i], helpers[i])) best = i;
    }
    return best;
}

}  // namespace

TEST(GeneratePlan, WorkedExample) {
    const std::vector<std::uint64_t> counts{100, 250, 600, 74};
    EXPECT_EQ(generate_plan(counts, 3).assignments, (std::vector<std::uint32_t>{2, 2, 1}));
}

TEST(GeneratePlan, TiesGoToLowestIndex) {
    const std::vector<std::uint64_t> counts{5, 5, 5, 5};
    EXPECT_EQ(generate_plan(counts, 3).assignments, (std::vector<std::uint32_t>{0, 1, 2}));
    const std::vector<std::uint64_t> zeros{0, 0};
    EXPECT_EQ(generate_plan(zeros, 1).assignments, (std::vector<std::uint32_t>{0}));
}

TEST(GeneratePlan, HelpersOf) {
    const std::vector<std::uint64_t> counts{100, 250, 600, 74};
    const auto plan = generate_plan(counts, 3);
    EXPECT_EQ(plan.helpers_of(2), 2u);
    EXPECT_EQ(plan.helpers_of(1), 1u);
    EXPECT_EQ(plan.helpers_of(0), 0u);
}

// The greedy plan minimises the largest per-PE load: compare against every
// helper distribution for small m and x.
TEST(GeneratePlan, MatchesBruteForceOptimum) {
    Rng rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        const auto m = 1 + static_cast<std::size_t>(rng.below(5));
        const auto x = static_cast<std::uint32_t>(rng.below(m));
        std::vector<std::uint64_t> counts(m);
        for (auto& c : counts) c = rng.below(4) == 0 ? 0 : rng.below(1000);

        const auto greedy = helper_counts(generate_plan(counts, x), m);
        const auto g = argmax_load(counts, greedy);

        std::vector<std::uint64_t> h(m, 0);
        bool found_better = false;
        std::function<void(std::size_t, std::uint32_t)> walk = [&](std::size_t i, std::uint32_t left) {
            if (i + 1 == m) {
                h[i] = left;
                const auto b = argmax_load(counts, h);
                if (less_load(counts[b], h[b], counts[g], greedy[g])) found_better = true;
                return;
            }
            for (std::uint32_t k = 0; k <= left; ++k) {
                h[i] = k;
                walk(i + 1, left - k);
            }
        };
        walk(0, x);
        ASSERT_FALSE(found_better) << "trial " << trial;
    }
}

TEST(LaneHistograms, MergeSumsLanes) {
    LaneHistograms h(2, 3);
    const std::vector<LaneObservation> a{{0, 1}, {1, 1}, {1, 2}};
    h.record_batch(a);
    h.record_batch(a);
    EXPECT_EQ(h.count(0, 1), 2u);
    EXPECT_EQ(h.count(1, 2), 2u);
    const auto merged = h.merge(10);
    EXPECT_EQ(merged.counts, (std::vector<std::uint64_t>{0, 4, 2}));
    EXPECT_EQ(merged.total(), 6u);
    EXPECT_EQ(merged.window_cycles, 10u);
    h.clear();
    EXPECT_EQ(h.merge(1).total(), 0u);
}

TEST(CheckThroughput, StrictComparison) {
    EXPECT_EQ(check_throughput(8.0, 0.8, 64, 10), Health::healthy);  // 6.4 == 0.8 * 8
    EXPECT_EQ(check_throughput(8.0, 0.8, 63, 10), Health::degraded);
    EXPECT_EQ(check_throughput(8.0, 0.0, 0, 10), Health::healthy);
}

TEST(ThroughputMonitor, DegradesAgainstBestWindow) {
    ThroughputMonitor mon(4, 0.5);
    std::vector<std::optional<Health>> verdicts;
    for (int i = 0; i < 4; ++i) verdicts.push_back(mon.tick(8));  // 8 per cycle
    EXPECT_EQ(verdicts.back(), Health::healthy);
    EXPECT_FALSE(verdicts.front().has_value());
    EXPECT_DOUBLE_EQ(mon.reference(), 8.0);
    for (int i = 0; i < 4; ++i) verdicts.push_back(mon.tick(4));  // exactly half: healthy
    EXPECT_EQ(verdicts.back(), Health::healthy);
    for (int i = 0; i < 4; ++i) verdicts.push_back(mon.tick(3));
    EXPECT_EQ(verdicts.back(), Health::degraded);
    mon.restart();
    EXPECT_DOUBLE_EQ(mon.reference(), 0.0);
}

TEST(ThroughputMonitor, SkippedEvaluationNeverDegrades) {
    ThroughputMonitor mon(2, 0.9);
    mon.tick(10);
    mon.tick(10);
    mon.tick(0);
    EXPECT_EQ(mon.tick(0, false), Health::healthy);
}

TEST(RuntimeProfiler, DisabledWithoutSecondaries) {
    RuntimeProfiler p({.m = 4, .x = 0});
    EXPECT_EQ(p.phase(), RuntimeProfiler::Phase::disabled);
    const auto act = p.tick({});
    EXPECT_FALSE(act.install.has_value());
}

TEST(RuntimeProfiler, EpochSequence) {
    RuntimeProfiler::Params params{.m = 2, .x = 1, .lanes = 1, .profiling_cycles = 3, .monitor_window = 2,
                                   .threshold = 0.5, .reschedule_overhead = 2};
    RuntimeProfiler p(params);
    using Phase = RuntimeProfiler::Phase;
    const std::vector<LaneObservation> to0{{0, 0}};
    const std::vector<LaneObservation> to1{{0, 1}};

    for (int i = 0; i < 3; ++i) {
        EXPECT_EQ(p.phase(), Phase::profiling);
        p.tick({.routed = to1});
    }
    ASSERT_EQ(p.phase(), Phase::planning);
    auto act = p.tick({});  // x = 1: one planning cycle
    ASSERT_TRUE(act.install.has_value());
    EXPECT_EQ(act.install->assignments, (std::vector<std::uint32_t>{1}));
    EXPECT_EQ(p.last_histogram()->counts, (std::vector<std::uint64_t>{0, 3}));

    act = p.tick({.mapper_pending = true});
    EXPECT_FALSE(act.plan_active);
    act = p.tick({.mapper_pending = false});
    EXPECT_TRUE(act.plan_active);
    ASSERT_EQ(p.phase(), Phase::monitoring);

    // Two good windows, then a collapsed one.
    for (int i = 0; i < 4; ++i) EXPECT_FALSE(p.tick({.routed = to0}).reset_mappers);
    p.tick({});
    act = p.tick({});
    EXPECT_TRUE(act.reset_mappers);
    EXPECT_EQ(p.epochs(), 1u);
    ASSERT_EQ(p.phase(), Phase::draining);

    EXPECT_FALSE(p.tick({.secondaries_drained = false}).fold_secondaries);
    EXPECT_TRUE(p.tick({.secondaries_drained = true}).fold_secondaries);
    EXPECT_EQ(p.phase(), Phase::restarting);
    p.tick({});
    p.tick({});
    EXPECT_EQ(p.phase(), Phase::profiling);
}

TEST(RuntimeProfiler, ZeroThresholdNeverReschedules) {
    RuntimeProfiler p({.m = 2, .x = 1, .lanes = 1, .profiling_cycles = 1, .monitor_window = 1, .threshold = 0.0});
    p.tick({});
    p.tick({});
    p.tick({});
    ASSERT_EQ(p.phase(), RuntimeProfiler::Phase::monitoring);
    const std::vector<LaneObservation> busy{{0, 0}};
    p.tick({.routed = busy});
    for (int i = 0; i < 100; ++i) EXPECT_FALSE(p.tick({}).reset_mappers);
    EXPECT_EQ(p.epochs(), 0u);
}
