#pragma once

#include "skewsim/channel.hpp"
#include "skewsim/config.hpp"
#include "skewsim/mapper.hpp"
#include "skewsim/profiler.hpp"
#include "skewsim/routing.hpp"
#include "skewsim/types.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace skewsim {

/// Engine-facing view of an application instance. The engine decides which
/// PE sees which payload; the workload owns every PE buffer and the merger's
/// intermediate results.
class PeWorkload {
public:
    virtual ~PeWorkload() = default;

    /// PrePE hook; must be a pure function of the tuple.
    virtual Prepared prepare(const TupleRecord& tuple) = 0;
    /// A secondary PE starts serving primary range `range` with an empty buffer.
    virtual void bind(std::uint32_t pe, std::uint32_t range) = 0;
    virtual void process(std::uint32_t pe, const Payload& payload) = 0;
    /// Merger folds a drained secondary PE into the intermediate result of its
    /// range and the PE becomes unassigned.
    virtual void release(std::uint32_t pe) = 0;
};

/// Read position in an in-memory tuple stream.
struct DatasetCursor {
    std::span<const TupleRecord> data;
    std::size_t position = 0;

    std::size_t remaining() const { return data.size() - position; }
};

/// Next memory-interface beat: up to w_mem / w_tuple tuples in stream order.
std::span<const TupleRecord> fetch_batch(DatasetCursor& cursor, const ArchConfig& cfg);

struct PlanInstall {
    std::uint64_t cycle = 0;  // cycle in which the last pair reached the mappers
    SchedulingPlan plan;
};

struct RescheduleEvent {
    std::uint64_t cycle = 0;  // cycle the degradation was detected and mappers reset
    SchedulingPlan retired;
    std::optional<PlanInstall> replacement;
};

struct SimMetrics {
    std::uint64_t input_tuples = 0;
    std::uint64_t total_cycles = 0;
    std::vector<std::uint64_t> tuples_processed;  // per PE, length M + X
    double throughput = 0.0;                      // input_tuples / total_cycles
    std::uint64_t stall_cycles = 0;               // router stalls
    std::vector<PlanInstall> plans;
    std::vector<RescheduleEvent> reschedule_events;
    std::uint32_t window_cycles = 0;
    std::vector<std::uint64_t> routed_per_window;  // tuples routed in each full window
    std::optional<std::uint64_t> first_plan_cycle;
    /// Throughput from the first active plan to the end (equals `throughput`
    /// when no plan was ever installed).
    double post_plan_throughput = 0.0;

    std::vector<double> per_epoch_throughput() const;
};

/// What happened in one simulated cycle.
struct CycleEvents {
    std::uint64_t cycle = 0;
    bool router_stalled = false;
    std::vector<RoutedTuple> routed;     // accepted by the router this cycle, with final dst
    std::vector<std::uint32_t> consumed; // PEs that dequeued a tuple this cycle
    RuntimeProfiler::Phase phase = RuntimeProfiler::Phase::disabled;
    bool finished = false;               // merger received every end-of-stream marker
};

/// Cycle-stepped model of the whole pipeline:
/// fetch -> PrePEs -> mappers + router -> PE channels -> Pri/SecPEs -> merger.
///
/// Every cycle, stages run consumer-first against start-of-cycle channel
/// occupancy, so results do not depend on stage order and each hop costs one
/// cycle.
class Simulator {
public:
    Simulator(const ArchConfig& cfg, std::span<const TupleRecord> data, PeWorkload& workload);

    const CycleEvents& advance_cycle();
    bool finished() const { return finished_; }
    std::uint64_t cycle() const { return cycle_; }

    /// Steps until the merger fires and returns the final metrics.
    const SimMetrics& run();
    const SimMetrics& metrics() const { return metrics_; }

    const ArchConfig& config() const { return cfg_; }
    const Channel<Token>& pe_channel(std::uint32_t pe) const { return pe_channels_[pe]; }
    const MappingState& mapping() const { return mapping_; }
    const RuntimeProfiler& profiler() const { return profiler_; }

private:
    struct RawToken {
        TupleRecord tuple;
        bool end_of_stream = false;
    };
    struct LaneTuple {
        RoutedTuple tuple;
        std::uint32_t lane = 0;
    };

    void step_pes();
    void step_router();
    void step_prepes();
    void step_fetch();
    void step_control();
    void finish();

    ArchConfig cfg_;
    PeWorkload& workload_;
    DatasetCursor cursor_;

    std::vector<Channel<RawToken>> prepe_in_;
    std::vector<Channel<Token>> prepe_out_;
    std::vector<std::uint64_t> prepe_ready_;
    std::vector<bool> prepe_done_;
    std::vector<std::uint32_t> fetch_counts_;
    std::uint32_t fetch_lane_ = 0;
    bool fetch_done_ = false;

    Router router_;
    MappingState mapping_;
    std::vector<LaneTuple> pending_;
    std::vector<RoutedTuple> batch_scratch_;
    std::vector<LaneObservation> observed_;
    std::vector<bool> lane_done_;
    bool sentinels_sent_ = false;

    std::vector<Channel<Token>> pe_channels_;
    std::vector<std::uint64_t> pe_ready_;
    std::uint32_t sentinels_merged_ = 0;

    RuntimeProfiler profiler_;
    std::optional<SchedulingPlan> active_plan_;
    std::optional<SchedulingPlan> installing_plan_;

    std::uint64_t cycle_ = 0;
    std::uint64_t routed_total_ = 0;
    std::uint64_t routed_at_first_plan_ = 0;
    std::uint64_t window_routed_ = 0;
    std::uint64_t idle_cycles_ = 0;
    bool finished_ = false;
    CycleEvents events_;
    SimMetrics metrics_;
};

}  // namespace skewsim
