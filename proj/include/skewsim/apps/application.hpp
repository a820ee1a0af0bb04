#pragma once

#include "skewsim/analyzer.hpp"
#include "skewsim/config.hpp"
#include "skewsim/engine.hpp"
#include "skewsim/types.hpp"

#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace skewsim {

/// Programming contract for a data-routed application.
///
/// The global buffer is split into `primaries()` ranges. `prepare` picks the
/// range (and so the primary PE) for a tuple, `process` folds a payload into
/// one range's buffer, `combine` merges two buffers of the same range, and
/// `finalize` turns the per-range buffers into the result.
template <class A>
concept Application = requires(const A& app, typename A::State& state, typename A::State&& from,
                               const TupleRecord& tuple, const Payload& payload, std::uint32_t range,
                               std::vector<typename A::State> ranges) {
    typename A::State;
    typename A::Result;
    { app.primaries() } -> std::convertible_to<std::uint32_t>;
    { app.prepare(tuple) } -> std::same_as<Prepared>;
    { app.make_state(range) } -> std::same_as<typename A::State>;
    app.process(state, payload);
    app.combine(state, std::move(from));
    { app.finalize(std::move(ranges)) } -> std::same_as<typename A::Result>;
    { app.buffer_entries() } -> std::convertible_to<std::uint64_t>;
};

/// Holds one application's PE buffers for a simulation run.
template <Application App>
class AppRuntime final : public PeWorkload {
public:
    AppRuntime(const App& app, std::uint32_t m, std::uint32_t x) : app_(app), m_(m), states_(m + x), range_of_(m + x) {
        if (app.primaries() != m) {
            throw ConfigError("application built for " + std::to_string(app.primaries()) +
                              " primary PEs but configuration has " + std::to_string(m));
        }
        for (std::uint32_t r = 0; r < m; ++r) {
            states_[r].emplace(app_.make_state(r));
            range_of_[r] = r;
        }
        folded_.resize(m);
    }

    Prepared prepare(const TupleRecord& tuple) override { return app_.prepare(tuple); }

    void bind(std::uint32_t pe, std::uint32_t range) override {
        if (pe < m_ || states_[pe]) throw InvariantViolation("bind on a primary or still-bound PE");
        states_[pe].emplace(app_.make_state(range));
        range_of_[pe] = range;
    }

    void process(std::uint32_t pe, const Payload& payload) override {
        if (!states_[pe]) throw InvariantViolation("tuple delivered to unassigned PE " + std::to_string(pe));
        app_.process(*states_[pe], payload);
    }

    void release(std::uint32_t pe) override {
        if (pe < m_ || !states_[pe]) return;
        auto& slot = folded_[range_of_[pe]];
        if (slot) {
            app_.combine(*slot, std::move(*states_[pe]));
        } else {
            slot = std::move(states_[pe]);
        }
        states_[pe].reset();
    }

    /// Final merge: secondaries still bound, then intermediate results, into
    /// each primary's buffer.
    typename App::Result finish() {
        for (std::uint32_t pe = m_; pe < states_.size(); ++pe) release(pe);
        std::vector<typename App::State> ranges;
        ranges.reserve(m_);
        for (std::uint32_t r = 0; r < m_; ++r) {
            auto state = std::move(*states_[r]);
            if (folded_[r]) app_.combine(state, std::move(*folded_[r]));
            ranges.push_back(std::move(state));
        }
        return app_.finalize(std::move(ranges));
    }

private:
    const App& app_;
    std::uint32_t m_;
    std::vector<std::optional<typename App::State>> states_;
    std::vector<std::uint32_t> range_of_;
    std::vector<std::optional<typename App::State>> folded_;
};

template <class Result>
struct SimOutcome {
    SimMetrics metrics;
    Result result;
};

/// Runs `data` through the simulated pipeline and merges the result.
template <Application App>
SimOutcome<typename App::Result> run_simulation(const ArchConfig& cfg, std::span<const TupleRecord> data,
                                                const App& app) {
    const auto valid = validate_config(cfg);
    if (valid.bram_capacity_c > 0) {
        const auto cap = bram_capacity(valid.m_pripe, valid.x_secpe, valid.bram_capacity_c);
        if (app.buffer_entries() > cap) {
            throw ConfigError("application buffers " + std::to_string(app.buffer_entries()) +
                              " entries but only " + std::to_string(cap) + " distinct entries fit with x_secpe=" +
                              std::to_string(valid.x_secpe));
        }
    }
    AppRuntime<App> runtime(app, valid.m_pripe, valid.x_secpe);
    Simulator sim(valid, data, runtime);
    auto metrics = sim.run();
    return {std::move(metrics), runtime.finish()};
}

/// Single-instance oracle: every tuple goes straight to its range's buffer in
/// stream order. No routing, no helpers.
template <Application App>
typename App::Result reference_run(const App& app, std::span<const TupleRecord> data) {
    std::vector<typename App::State> ranges;
    ranges.reserve(app.primaries());
    for (std::uint32_t r = 0; r < app.primaries(); ++r) ranges.push_back(app.make_state(r));
    for (const auto& t : data) {
        const auto prep = app.prepare(t);
        app.process(ranges.at(prep.dst), prep.payload);
    }
    return app.finalize(std::move(ranges));
}

}  // namespace skewsim
