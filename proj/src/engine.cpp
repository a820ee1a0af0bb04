#include "skewsim/engine.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace skewsim {

namespace {

// Cycles without any token movement before the run is declared wedged.
constexpr std::uint64_t kMaxIdleCycles = std::uint64_t{1} << 22;

}  // namespace

std::span<const TupleRecord> fetch_batch(DatasetCursor& cursor, const ArchConfig& cfg) {
    const auto n = std::min<std::size_t>(cursor.remaining(), cfg.tuples_per_fetch());
    auto out = cursor.data.subspan(cursor.position, n);
    cursor.position += n;
    return out;
}

std::vector<double> SimMetrics::per_epoch_throughput() const {
    std::vector<double> out;
    out.reserve(routed_per_window.size());
    for (auto routed : routed_per_window) out.push_back(static_cast<double>(routed) / window_cycles);
    return out;
}

Simulator::Simulator(const ArchConfig& cfg, std::span<const TupleRecord> data, PeWorkload& workload)
    : cfg_(validate_config(cfg)),
      workload_(workload),
      cursor_{data, 0},
      router_(cfg_.n_prepe),
      mapping_(cfg_.m_pripe, cfg_.x_secpe, cfg_.n_prepe),
      profiler_(RuntimeProfiler::Params{cfg_.m_pripe, cfg_.x_secpe, cfg_.n_prepe, cfg_.profiling_cycles,
                                        cfg_.monitor_window, cfg_.throughput_threshold,
                                        cfg_.reschedule_overhead}) {
    const auto lanes = cfg_.n_prepe;
    const auto per_lane = (cfg_.tuples_per_fetch() + lanes - 1) / lanes;
    // Depth 2 lets a one-per-cycle producer/consumer pair run at full rate
    // under start-of-cycle occupancy.
    for (std::uint32_t i = 0; i < lanes; ++i) {
        prepe_in_.emplace_back(2 * std::max<std::size_t>(1, per_lane));
        prepe_out_.emplace_back(2);
    }
    prepe_ready_.assign(lanes, 0);
    prepe_done_.assign(lanes, false);
    fetch_counts_.assign(lanes, 0);
    lane_done_.assign(lanes, false);

    const auto pes = cfg_.total_pes();
    for (std::uint32_t pe = 0; pe < pes; ++pe) pe_channels_.emplace_back(cfg_.channel_depth);
    pe_ready_.assign(pes, 0);

    metrics_.input_tuples = data.size();
    metrics_.tuples_processed.assign(pes, 0);
    metrics_.window_cycles = cfg_.monitor_window;
    pending_.reserve(lanes);
    batch_scratch_.reserve(lanes);
    observed_.reserve(lanes);
}

const CycleEvents& Simulator::advance_cycle() {
    if (finished_) throw InvariantViolation("advance_cycle called on a finished simulation");

    for (auto& ch : prepe_in_) ch.begin_cycle();
    for (auto& ch : prepe_out_) ch.begin_cycle();
    for (auto& ch : pe_channels_) ch.begin_cycle();

    events_.cycle = cycle_;
    events_.router_stalled = false;
    events_.routed.clear();
    events_.consumed.clear();
    events_.finished = false;

    const auto moved_before = routed_total_;
    const auto fetched_before = cursor_.position;

    // Downstream first: a stage never sees what its producer emits this cycle.
    step_pes();
    step_router();
    step_prepes();
    step_fetch();
    step_control();

    events_.phase = profiler_.phase();

    const bool progressed = !events_.consumed.empty() || routed_total_ != moved_before ||
                            cursor_.position != fetched_before;
    idle_cycles_ = progressed ? 0 : idle_cycles_ + 1;
    if (idle_cycles_ > kMaxIdleCycles) {
        throw InvariantViolation("simulation made no progress for " + std::to_string(kMaxIdleCycles) +
                                 " cycles at cycle " + std::to_string(cycle_));
    }

    ++cycle_;
    if (sentinels_merged_ == cfg_.total_pes()) {
        finish();
        events_.finished = true;
    }
    return events_;
}

void Simulator::step_pes() {
    for (std::uint32_t pe = 0; pe < pe_channels_.size(); ++pe) {
        auto& ch = pe_channels_[pe];
        if (ch.empty() || cycle_ < pe_ready_[pe]) continue;
        const auto tok = ch.pop();
        events_.consumed.push_back(pe);
        if (tok.end_of_stream) {
            ++sentinels_merged_;
            continue;
        }
        workload_.process(pe, tok.tuple.payload);
        ++metrics_.tuples_processed[pe];
        pe_ready_[pe] = cycle_ + cfg_.ii_pripe;
    }
}

void Simulator::step_router() {
    observed_.clear();

    if (pending_.empty()) {
        for (std::uint32_t lane = 0; lane < prepe_out_.size(); ++lane) {
            auto& ch = prepe_out_[lane];
            if (lane_done_[lane] || ch.empty()) continue;
            const auto tok = ch.pop();
            if (tok.end_of_stream) {
                lane_done_[lane] = true;
            } else {
                pending_.push_back({tok.tuple, lane});
            }
        }
    }

    if (!pending_.empty()) {
        // Mappers: tentative lookup; cursors move only if the batch goes through.
        batch_scratch_.clear();
        for (auto& lt : pending_) {
            lt.tuple.dst = mapping_.peek(lt.tuple.primary, lt.lane);
            batch_scratch_.push_back(lt.tuple);
        }
        if (router_.route_cycle(batch_scratch_, pe_channels_) == RouteResult::accepted) {
            for (const auto& lt : pending_) {
                mapping_.advance(lt.tuple.primary, lt.lane);
                observed_.push_back({lt.lane, lt.tuple.primary});
            }
            events_.routed = batch_scratch_;
            routed_total_ += pending_.size();
            pending_.clear();
        } else {
            events_.router_stalled = true;
        }
        return;
    }

    const bool all_lanes_done = std::all_of(lane_done_.begin(), lane_done_.end(), [](bool b) { return b; });
    if (all_lanes_done && !sentinels_sent_) {
        const bool room = std::all_of(pe_channels_.begin(), pe_channels_.end(),
                                      [](const auto& ch) { return ch.can_accept(1); });
        if (room) {
            for (auto& ch : pe_channels_) ch.push(Token{{}, true});
            sentinels_sent_ = true;
        }
    }
}

void Simulator::step_prepes() {
    for (std::uint32_t lane = 0; lane < prepe_in_.size(); ++lane) {
        auto& in = prepe_in_[lane];
        auto& out = prepe_out_[lane];
        if (prepe_done_[lane] || in.empty() || cycle_ < prepe_ready_[lane] || !out.can_accept(1)) continue;
        const auto raw = in.pop();
        if (raw.end_of_stream) {
            out.push(Token{{}, true});
            prepe_done_[lane] = true;
            continue;
        }
        const auto prep = workload_.prepare(raw.tuple);
        if (prep.dst >= cfg_.m_pripe) {
            throw InvariantViolation("prepare returned destination " + std::to_string(prep.dst) +
                                     " outside [0, " + std::to_string(cfg_.m_pripe) + ")");
        }
        out.push(Token{RoutedTuple{prep.payload, prep.dst, prep.dst}, false});
        prepe_ready_[lane] = cycle_ + cfg_.ii_prepe;
    }
}

void Simulator::step_fetch() {
    if (fetch_done_) return;
    const auto lanes = static_cast<std::uint32_t>(prepe_in_.size());

    if (cursor_.remaining() == 0) {
        const bool room = std::all_of(prepe_in_.begin(), prepe_in_.end(),
                                      [](const auto& ch) { return ch.can_accept(1); });
        if (room) {
            for (auto& ch : prepe_in_) ch.push(RawToken{{}, true});
            fetch_done_ = true;
        }
        return;
    }

    // The beat is accepted whole or not at all.
    const auto want = std::min<std::size_t>(cursor_.remaining(), cfg_.tuples_per_fetch());
    std::fill(fetch_counts_.begin(), fetch_counts_.end(), 0u);
    for (std::size_t i = 0; i < want; ++i) ++fetch_counts_[(fetch_lane_ + i) % lanes];
    for (std::uint32_t lane = 0; lane < lanes; ++lane) {
        if (!prepe_in_[lane].can_accept(fetch_counts_[lane])) return;
    }
    const auto beat = fetch_batch(cursor_, cfg_);
    for (const auto& t : beat) {
        prepe_in_[fetch_lane_].push(RawToken{t, false});
        fetch_lane_ = (fetch_lane_ + 1) % lanes;
    }
}

void Simulator::step_control() {
    mapping_.apply_next_pending();

    const auto m = cfg_.m_pripe;
    const bool drained = std::all_of(pe_channels_.begin() + m, pe_channels_.end(),
                                     [](const auto& ch) { return ch.empty(); });
    const auto act = profiler_.tick(RuntimeProfiler::Inputs{observed_, mapping_.has_pending(), drained,
                                                            cursor_.remaining() == 0});

    if (act.install) {
        installing_plan_ = act.install;
        for (std::uint32_t i = 0; i < act.install->assignments.size(); ++i) {
            workload_.bind(m + i, act.install->assignments[i]);
        }
        mapping_.enqueue_plan(act.install->assignments);
    }
    if (act.plan_active && installing_plan_) {
        PlanInstall rec{cycle_, *installing_plan_};
        metrics_.plans.push_back(rec);
        if (!metrics_.first_plan_cycle) {
            metrics_.first_plan_cycle = cycle_ + 1;
            routed_at_first_plan_ = routed_total_;
        }
        if (!metrics_.reschedule_events.empty() && !metrics_.reschedule_events.back().replacement) {
            metrics_.reschedule_events.back().replacement = rec;
        }
        active_plan_ = std::move(installing_plan_);
        installing_plan_.reset();
    }
    if (act.reset_mappers) {
        mapping_.reset();
        metrics_.reschedule_events.push_back(
            RescheduleEvent{cycle_, active_plan_.value_or(SchedulingPlan{}), std::nullopt});
        active_plan_.reset();
    }
    if (act.fold_secondaries) {
        for (std::uint32_t pe = m; pe < cfg_.total_pes(); ++pe) workload_.release(pe);
    }

    window_routed_ += observed_.size();
    if ((cycle_ + 1) % cfg_.monitor_window == 0) {
        metrics_.routed_per_window.push_back(window_routed_);
        window_routed_ = 0;
    }
}

void Simulator::finish() {
    finished_ = true;
    metrics_.total_cycles = cycle_;
    metrics_.stall_cycles = router_.stall_cycles();

    const auto processed = std::accumulate(metrics_.tuples_processed.begin(), metrics_.tuples_processed.end(),
                                           std::uint64_t{0});
    if (processed != metrics_.input_tuples || routed_total_ != metrics_.input_tuples) {
        throw InvariantViolation("conservation violated: " + std::to_string(metrics_.input_tuples) +
                                 " tuples in, " + std::to_string(routed_total_) + " routed, " +
                                 std::to_string(processed) + " processed");
    }
    metrics_.throughput =
        cycle_ == 0 ? 0.0 : static_cast<double>(metrics_.input_tuples) / static_cast<double>(cycle_);
    if (metrics_.first_plan_cycle && *metrics_.first_plan_cycle < cycle_) {
        metrics_.post_plan_throughput = static_cast<double>(routed_total_ - routed_at_first_plan_) /
                                        static_cast<double>(cycle_ - *metrics_.first_plan_cycle);
    } else {
        metrics_.post_plan_throughput = metrics_.throughput;
    }
}

const SimMetrics& Simulator::run() {
    while (!finished_) advance_cycle();
    return metrics_;
}

}  // namespace skewsim
