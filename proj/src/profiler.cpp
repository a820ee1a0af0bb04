#include "skewsim/profiler.hpp"

#include "skewsim/types.hpp"

#include <algorithm>
#include <numeric>

namespace skewsim {

std::uint32_t SchedulingPlan::helpers_of(std::uint32_t pripe) const {
    return static_cast<std::uint32_t>(std::count(assignments.begin(), assignments.end(), pripe));
}

std::uint64_t WorkloadHistogram::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

LaneHistograms::LaneHistograms(std::uint32_t lanes, std::uint32_t m)
    : lanes_(lanes), m_(m), partial_(std::size_t{lanes} * m, 0) {}

void LaneHistograms::record_batch(std::span<const LaneObservation> observed) {
    for (const auto& obs : observed) {
        if (obs.lane >= lanes_ || obs.primary >= m_) {
            throw InvariantViolation("profiler observation outside [lanes) x [M)");
        }
        ++partial_[obs.lane * m_ + obs.primary];
    }
}

WorkloadHistogram LaneHistograms::merge(std::uint64_t window_cycles) const {
    WorkloadHistogram hist{std::vector<std::uint64_t>(m_, 0), window_cycles};
    for (std::uint32_t lane = 0; lane < lanes_; ++lane) {
        for (std::uint32_t r = 0; r < m_; ++r) hist.counts[r] += partial_[lane * m_ + r];
    }
    return hist;
}

void LaneHistograms::clear() { std::fill(partial_.begin(), partial_.end(), 0); }

SchedulingPlan generate_plan(std::span<const std::uint64_t> counts, std::uint32_t x) {
    SchedulingPlan plan;
    if (x == 0) return plan;
    if (counts.empty()) throw ConfigError("cannot plan over an empty histogram");
    if (x > counts.size() - 1) throw ConfigError("x_secpe exceeds M-1");

    std::vector<std::uint64_t> serving(counts.size(), 1);
    plan.assignments.reserve(x);
    for (std::uint32_t i = 0; i < x; ++i) {
        // counts[a]/serving[a] > counts[b]/serving[b]  <=>  counts[a]*serving[b] > counts[b]*serving[a]
        std::size_t best = 0;
        for (std::size_t r = 1; r < counts.size(); ++r) {
            const auto lhs = static_cast<unsigned __int128>(counts[r]) * serving[best];
            const auto rhs = static_cast<unsigned __int128>(counts[best]) * serving[r];
            if (lhs > rhs) best = r;
        }
        plan.assignments.push_back(static_cast<std::uint32_t>(best));
        ++serving[best];
    }
    return plan;
}

Health check_throughput(double reference, double threshold, std::uint64_t delta, std::uint64_t window) {
    if (threshold <= 0.0 || window == 0) return Health::healthy;
    const double observed = static_cast<double>(delta) / static_cast<double>(window);
    return observed < threshold * reference ? Health::degraded : Health::healthy;
}

std::optional<Health> ThroughputMonitor::tick(std::uint64_t processed, bool evaluate) {
    ++ticks_;
    in_window_ += processed;
    if (ticks_ % window_ != 0) return std::nullopt;

    const auto delta = in_window_;
    in_window_ = 0;
    if (!evaluate) return Health::healthy;
    const auto verdict = check_throughput(reference_, threshold_, delta, window_);
    reference_ = std::max(reference_, static_cast<double>(delta) / window_);
    return verdict;
}

void ThroughputMonitor::restart() {
    reference_ = 0.0;
    ticks_ = 0;
    in_window_ = 0;
}

RuntimeProfiler::RuntimeProfiler(const Params& params)
    : params_(params),
      hists_(params.lanes, params.m),
      monitor_(params.monitor_window, params.threshold) {
    if (params_.x > 0) start_profiling();
}

void RuntimeProfiler::start_profiling() {
    hists_.clear();
    countdown_ = 0;
    plan_.reset();
    phase_ = Phase::profiling;
}

RuntimeProfiler::Actions RuntimeProfiler::tick(const Inputs& in) {
    Actions act;
    switch (phase_) {
    case Phase::disabled:
        break;

    case Phase::profiling:
        hists_.record_batch(in.routed);
        if (++countdown_ >= params_.profiling_cycles) {
            last_hist_ = hists_.merge(params_.profiling_cycles);
            plan_ = generate_plan(*last_hist_, params_.x);
            // Serial plan generation: one helper per cycle.
            countdown_ = params_.x;
            phase_ = Phase::planning;
        }
        break;

    case Phase::planning:
        if (--countdown_ == 0) {
            act.install = plan_;
            phase_ = Phase::installing;
        }
        break;

    case Phase::installing:
        if (!in.mapper_pending) {
            act.plan_active = true;
            monitor_.restart();
            phase_ = Phase::monitoring;
        }
        break;

    case Phase::monitoring: {
        const bool evaluate = params_.threshold > 0.0 && !in.input_exhausted;
        const auto verdict = monitor_.tick(in.routed.size(), evaluate);
        if (verdict == Health::degraded) {
            act.reset_mappers = true;
            ++epochs_;
            phase_ = Phase::draining;
        }
        break;
    }

    case Phase::draining:
        if (in.secondaries_drained) {
            act.fold_secondaries = true;
            if (params_.reschedule_overhead == 0) {
                start_profiling();
            } else {
                countdown_ = params_.reschedule_overhead;
                phase_ = Phase::restarting;
            }
        }
        break;

    case Phase::restarting:
        if (--countdown_ == 0) start_profiling();
        break;
    }
    return act;
}

}  // namespace skewsim
