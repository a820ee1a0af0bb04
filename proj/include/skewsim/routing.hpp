#pragma once

#include "skewsim/channel.hpp"
#include "skewsim/types.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace skewsim {

inline constexpr unsigned kMaxRouterLanes = 16;

/// Preset decoder output for one mask code.
struct DecodeEntry {
    std::uint8_t count = 0;
    std::array<std::uint8_t, kMaxRouterLanes> positions{};  // first `count` are valid, ascending

    std::span<const std::uint8_t> set_positions() const { return {positions.data(), count}; }
};

/// Mask code -> (tuple count, lane positions). One entry per possible mask.
class DecodeTable {
public:
    explicit DecodeTable(unsigned lanes);

    unsigned lanes() const { return lanes_; }
    std::size_t size() const { return entries_.size(); }
    const DecodeEntry& operator[](std::uint32_t mask) const { return entries_[mask]; }

private:
    unsigned lanes_;
    std::vector<DecodeEntry> entries_;
};

/// Builds the table for `n` lanes, 1 <= n <= 16. Throws ConfigError otherwise.
DecodeTable build_decode_table(unsigned n);

/// Bit i is set iff batch[i].dst == pe.
std::uint32_t destination_mask(std::span<const RoutedTuple> batch, std::uint32_t pe);

/// Tuples of `batch` addressed to `pe`, in lane order, extracted through the
/// preset table.
std::vector<RoutedTuple> decode(const DecodeTable& table, std::span<const RoutedTuple> batch, std::uint32_t pe);

enum class RouteResult { accepted, stalled };

/// Combiner + per-destination decoder/filter. A batch is delivered atomically:
/// either every destination channel takes all of its tuples this cycle, or
/// nothing moves and the cycle counts as a stall.
class Router {
public:
    explicit Router(unsigned lanes) : table_(build_decode_table(lanes)) {}

    RouteResult route_cycle(std::span<const RoutedTuple> batch, std::span<Channel<Token>> channels);

    const DecodeTable& table() const { return table_; }
    std::uint64_t stall_cycles() const { return stalls_; }

private:
    DecodeTable table_;
    std::uint64_t stalls_ = 0;
};

}  // namespace skewsim
