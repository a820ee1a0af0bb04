#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace skewsim {

/// Entry i names the primary PE helped by secondary PE (M + i).
struct SchedulingPlan {
    std::vector<std::uint32_t> assignments;

    std::uint32_t helpers_of(std::uint32_t pripe) const;
    friend bool operator==(const SchedulingPlan&, const SchedulingPlan&) = default;
};

/// Tuples observed per primary PE during one profiling window.
struct WorkloadHistogram {
    std::vector<std::uint64_t> counts;
    std::uint64_t window_cycles = 0;

    std::uint64_t total() const;
};

/// One routing lane's view of a cycle: which primary range its tuple targeted.
struct LaneObservation {
    std::uint32_t lane = 0;
    std::uint32_t primary = 0;
};

/// The N independent per-lane histogram instances.
class LaneHistograms {
public:
    LaneHistograms(std::uint32_t lanes, std::uint32_t m);

    void record_batch(std::span<const LaneObservation> observed);
    std::uint64_t count(std::uint32_t lane, std::uint32_t pripe) const { return partial_[lane * m_ + pripe]; }
    WorkloadHistogram merge(std::uint64_t window_cycles) const;
    void clear();

private:
    std::uint32_t lanes_;
    std::uint32_t m_;
    std::vector<std::uint64_t> partial_;
};

/// Greedy plan: x times, give the next secondary to the primary whose
/// workload per serving PE (count / (1 + helpers)) is largest. Comparisons
/// are exact; ties go to the lowest primary index.
SchedulingPlan generate_plan(std::span<const std::uint64_t> counts, std::uint32_t x);
inline SchedulingPlan generate_plan(const WorkloadHistogram& hist, std::uint32_t x) {
    return generate_plan(hist.counts, x);
}

enum class Health { healthy, degraded };

/// degraded iff delta / window < threshold * reference. A zero threshold
/// never degrades.
Health check_throughput(double reference, double threshold, std::uint64_t delta, std::uint64_t window);

/// Windowed throughput tracking against the best window since the last restart.
class ThroughputMonitor {
public:
    ThroughputMonitor(std::uint32_t window, double threshold) : window_(window), threshold_(threshold) {}

    std::uint32_t window() const { return window_; }
    double reference() const { return reference_; }
    std::uint64_t ticks() const { return ticks_; }

    /// Advances one clock tick with `processed` tuples seen this cycle.
    /// Returns the verdict when a window closes.
    std::optional<Health> tick(std::uint64_t processed, bool evaluate = true);
    void restart();

private:
    std::uint32_t window_;
    double threshold_;
    double reference_ = 0.0;
    std::uint64_t ticks_ = 0;
    std::uint64_t in_window_ = 0;
};

/// Runtime profiler: builds the plan, watches throughput, and sequences the
/// rescheduling epoch. The engine feeds it one `tick` per cycle and carries
/// out the returned actions.
class RuntimeProfiler {
public:
    enum class Phase { disabled, profiling, planning, installing, monitoring, draining, restarting };

    struct Params {
        std::uint32_t m = 1;
        std::uint32_t x = 0;
        std::uint32_t lanes = 1;
        std::uint32_t profiling_cycles = 256;
        std::uint32_t monitor_window = 1024;
        double threshold = 0.8;
        std::uint32_t reschedule_overhead = 0;
    };

    struct Inputs {
        std::span<const LaneObservation> routed;  // primaries routed this cycle
        bool mapper_pending = false;              // plan pairs still queued in the mappers
        bool secondaries_drained = false;         // every SecPE channel empty
        bool input_exhausted = false;             // no more tuples to fetch
    };

    struct Actions {
        std::optional<SchedulingPlan> install;
        bool plan_active = false;       // last queued pair has been applied
        bool reset_mappers = false;     // epoch begins
        bool fold_secondaries = false;  // SecPEs drained; merge and release them
    };

    explicit RuntimeProfiler(const Params& params);

    Actions tick(const Inputs& in);

    Phase phase() const { return phase_; }
    const std::optional<WorkloadHistogram>& last_histogram() const { return last_hist_; }
    const std::optional<SchedulingPlan>& active_plan() const { return plan_; }
    std::uint64_t epochs() const { return epochs_; }

private:
    void start_profiling();

    Params params_;
    Phase phase_ = Phase::disabled;
    LaneHistograms hists_;
    ThroughputMonitor monitor_;
    std::uint64_t countdown_ = 0;
    std::optional<WorkloadHistogram> last_hist_;
    std::optional<SchedulingPlan> plan_;
    std::uint64_t epochs_ = 0;
};

}  // namespace skewsim
