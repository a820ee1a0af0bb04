#include "skewsim/mapper.hpp"

#include <algorithm>
#include <string>

namespace skewsim {

MappingState::MappingState(std::uint32_t m, std::uint32_t x, std::uint32_t lanes)
    : m_(m), x_(x), lanes_(lanes) {
    if (m < 1) throw MappingError("mapping needs at least one primary PE");
    if (x > m - 1) throw MappingError("x_secpe exceeds M-1");
    if (lanes < 1) throw MappingError("mapping needs at least one lane");
    table_.resize(std::size_t{m} * (x + 1));
    counters_.resize(m);
    cursors_.resize(std::size_t{m} * lanes);
    placed_.resize(x);
    reset();
}

void MappingState::reset() {
    for (std::uint32_t r = 0; r < m_; ++r) {
        std::fill_n(table_.begin() + static_cast<std::ptrdiff_t>(r * (x_ + 1)), x_ + 1, r);
    }
    std::fill(counters_.begin(), counters_.end(), 1u);
    std::fill(cursors_.begin(), cursors_.end(), 0u);
    std::fill(placed_.begin(), placed_.end(), false);
    pending_.clear();
}

void MappingState::apply_plan_pair(std::uint32_t secpe, std::uint32_t pripe) {
    if (pripe >= m_) throw MappingError("primary PE " + std::to_string(pripe) + " out of range");
    if (secpe < m_ || secpe >= m_ + x_) {
        throw MappingError("secondary PE " + std::to_string(secpe) + " out of range");
    }
    if (placed_[secpe - m_]) throw MappingError("secondary PE already placed");
    auto& count = counters_[pripe];
    if (count > x_) throw MappingError("row overflow");
    table_[pripe * (x_ + 1) + count] = secpe;
    ++count;
    placed_[secpe - m_] = true;
}

std::uint32_t MappingState::peek(std::uint32_t pripe, std::uint32_t lane) const {
    const auto count = counters_[pripe];
    const auto col = (cursors_[lane * m_ + pripe] + lane) % count;
    return table_[pripe * (x_ + 1) + col];
}

void MappingState::advance(std::uint32_t pripe, std::uint32_t lane) {
    auto& cur = cursors_[lane * m_ + pripe];
    cur = (cur + 1) % counters_[pripe];
}

std::uint32_t MappingState::redirect(std::uint32_t pripe, std::uint32_t lane) {
    const auto pe = peek(pripe, lane);
    advance(pripe, lane);
    return pe;
}

void MappingState::enqueue_plan(std::span<const std::uint32_t> assignments) {
    if (assignments.size() > x_) throw MappingError("plan has more entries than secondary PEs");
    for (std::uint32_t i = 0; i < assignments.size(); ++i) pending_.emplace_back(m_ + i, assignments[i]);
}

bool MappingState::apply_next_pending() {
    if (pending_.empty()) return false;
    auto [secpe, pripe] = pending_.front();
    pending_.pop_front();
    apply_plan_pair(secpe, pripe);
    return true;
}

bool MappingState::routes_to_secondaries() const {
    return std::any_of(counters_.begin(), counters_.end(), [](auto c) { return c > 1; });
}

}  // namespace skewsim
