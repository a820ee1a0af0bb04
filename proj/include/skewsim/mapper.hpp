#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace skewsim {

class MappingError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Mapping table shared by the N mapper lanes.
///
/// Row r lists the PEs serving primary range r: column 0 is always r itself,
/// columns [1, counter(r)) hold secondary PEs in the order they were placed.
/// Each lane keeps its own round-robin cursor per row; lane l reads column
/// (cursor + l) mod counter(r), so lanes hitting the same row in one cycle
/// spread across its PEs. Lane 0 follows the plain table order.
class MappingState {
public:
    MappingState(std::uint32_t m, std::uint32_t x, std::uint32_t lanes = 1);

    std::uint32_t primaries() const { return m_; }
    std::uint32_t secondaries() const { return x_; }
    std::uint32_t lanes() const { return lanes_; }

    std::uint32_t entry(std::uint32_t row, std::uint32_t col) const { return table_[row * (x_ + 1) + col]; }
    std::uint32_t counter(std::uint32_t row) const { return counters_[row]; }
    std::uint32_t cursor(std::uint32_t row, std::uint32_t lane = 0) const { return cursors_[lane * m_ + row]; }

    /// Appends `secpe` to row `pripe`. Throws MappingError on a duplicate
    /// placement, a full row, or out-of-range ids.
    void apply_plan_pair(std::uint32_t secpe, std::uint32_t pripe);

    /// Destination for the next tuple of range `pripe` on `lane`; advances the cursor.
    std::uint32_t redirect(std::uint32_t pripe, std::uint32_t lane = 0);
    /// Same lookup without advancing.
    std::uint32_t peek(std::uint32_t pripe, std::uint32_t lane = 0) const;
    void advance(std::uint32_t pripe, std::uint32_t lane = 0);

    /// Back to the identity mapping; pending plan pairs are dropped.
    void reset();

    /// Queues a plan (entry i is the primary helped by secondary M+i). Pairs
    /// are applied one at a time by `apply_next_pending`.
    void enqueue_plan(std::span<const std::uint32_t> assignments);
    bool has_pending() const { return !pending_.empty(); }
    /// Applies at most one queued pair; false when the queue was empty.
    bool apply_next_pending();

    /// True while any secondary PE is placed.
    bool routes_to_secondaries() const;

private:
    std::uint32_t m_;
    std::uint32_t x_;
    std::uint32_t lanes_;
    std::vector<std::uint32_t> table_;
    std::vector<std::uint32_t> counters_;
    std::vector<std::uint32_t> cursors_;
    std::vector<bool> placed_;
    std::deque<std::pair<std::uint32_t, std::uint32_t>> pending_;
};

/// Fresh identity mapping for `m` primaries and `x` secondaries.
inline MappingState init_mapping(std::uint32_t m, std::uint32_t x, std::uint32_t lanes = 1) {
    return MappingState(m, x, lanes);
}

}  // namespace skewsim
