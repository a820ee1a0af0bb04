#include "skewsim/routing.hpp"

#include <string>

namespace skewsim {

DecodeTable::DecodeTable(unsigned lanes) : lanes_(lanes) {
    if (lanes < 1 || lanes > kMaxRouterLanes) {
        throw ConfigError("decode table lane count must be in [1, 16], got " + std::to_string(lanes));
    }
    entries_.resize(std::size_t{1} << lanes);
    for (std::uint32_t mask = 0; mask < entries_.size(); ++mask) {
        auto& e = entries_[mask];
        for (unsigned bit = 0; bit < lanes; ++bit) {
            if (mask & (1u << bit)) e.positions[e.count++] = static_cast<std::uint8_t>(bit);
        }
    }
}

DecodeTable build_decode_table(unsigned n) { return DecodeTable(n); }

std::uint32_t destination_mask(std::span<const RoutedTuple> batch, std::uint32_t pe) {
    std::uint32_t mask = 0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        if (batch[i].dst == pe) mask |= 1u << i;
    }
    return mask;
}

std::vector<RoutedTuple> decode(const DecodeTable& table, std::span<const RoutedTuple> batch, std::uint32_t pe) {
    if (batch.size() > table.lanes()) throw InvariantViolation("batch wider than router lanes");
    std::vector<RoutedTuple> out;
    for (auto pos : table[destination_mask(batch, pe)].set_positions()) out.push_back(batch[pos]);
    return out;
}

RouteResult Router::route_cycle(std::span<const RoutedTuple> batch, std::span<Channel<Token>> channels) {
    if (batch.size() > table_.lanes()) throw InvariantViolation("batch wider than router lanes");

    // Only destinations present in the batch have a nonzero mask; the others
    // decode to nothing and are skipped.
    std::array<std::uint32_t, kMaxRouterLanes> dsts{};
    std::array<std::uint32_t, kMaxRouterLanes> masks{};
    std::size_t distinct = 0;
    for (std::size_t lane = 0; lane < batch.size(); ++lane) {
        const auto dst = batch[lane].dst;
        if (dst >= channels.size()) {
            throw InvariantViolation("routed tuple addressed to PE " + std::to_string(dst) + " of " +
                                     std::to_string(channels.size()));
        }
        std::size_t k = 0;
        while (k < distinct && dsts[k] != dst) ++k;
        if (k == distinct) {
            dsts[distinct] = dst;
            masks[distinct] = 0;
            ++distinct;
        }
        masks[k] |= 1u << lane;
    }

    for (std::size_t k = 0; k < distinct; ++k) {
        if (!channels[dsts[k]].can_accept(table_[masks[k]].count)) {
            ++stalls_;
            return RouteResult::stalled;
        }
    }
    for (std::size_t k = 0; k < distinct; ++k) {
        auto& ch = channels[dsts[k]];
        for (auto pos : table_[masks[k]].set_positions()) ch.push(Token{batch[pos], false});
    }
    return RouteResult::accepted;
}

}  // namespace skewsim
