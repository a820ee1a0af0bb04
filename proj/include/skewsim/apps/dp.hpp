#pragma once

#include "skewsim/types.hpp"

#include <cstdint>
#include <vector>

namespace skewsim {

/// Radix data partitioning. Not decomposable: every PE writes full buffer
/// lines into its own output region and the final result concatenates the
/// regions of a partition.
class DpApp {
public:
    struct Partition {
        std::vector<TupleRecord> line;    // partially filled buffer line
        std::vector<TupleRecord> region;  // flushed lines, in flush order
    };
    struct State {
        std::vector<Partition> partitions;  // local index = partition / M
    };
    using Result = std::vector<std::vector<TupleRecord>>;

    DpApp(std::uint32_t fanout, std::uint32_t m, std::uint32_t buffer_line = 8);

    std::uint32_t primaries() const { return m_; }
    std::uint32_t fanout() const { return fanout_; }
    std::uint64_t buffer_entries() const { return std::uint64_t{fanout_} * buffer_line_; }

    /// Low bits of the key for power-of-two fanouts, key mod fanout otherwise.
    std::uint64_t partition_of(std::uint64_t key) const { return key % fanout_; }

    Prepared prepare(const TupleRecord& t) const {
        return {static_cast<std::uint32_t>(partition_of(t.key) % m_), {t.key, t.value}};
    }
    State make_state(std::uint32_t range) const;
    void process(State& s, const Payload& p) const;
    void combine(State& into, State&& from) const;
    Result finalize(std::vector<State> ranges) const;

private:
    std::uint32_t fanout_;
    std::uint32_t m_;
    std::uint32_t buffer_line_;
};

/// True iff every partition holds the same multiset of tuples.
bool same_partitions(const DpApp::Result& a, const DpApp::Result& b);

}  // namespace skewsim
