#pragma once

#include "skewsim/types.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace skewsim {

/// Bounded FIFO connecting two pipeline stages.
///
/// Free space is judged against the occupancy at the start of the current
/// cycle: slots released by a pop become usable only after `begin_cycle()`.
/// Together with consumers running before producers inside a cycle this gives
/// two-phase (read-all, commit-all) semantics with one cycle of latency.
template <class T>
class Channel {
public:
    explicit Channel(std::size_t capacity = 1) : slots_(capacity) {
        if (capacity == 0) throw ConfigError("channel capacity must be at least 1");
    }

    std::size_t capacity() const { return slots_.size(); }
    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    /// Slots a producer may fill this cycle.
    std::size_t free_slots() const { return capacity() - size_ - popped_this_cycle_; }
    bool can_accept(std::size_t n) const { return n <= free_slots(); }

    void push(const T& item) {
        if (!can_accept(1)) {
            throw InvariantViolation("push into full channel (capacity " + std::to_string(capacity()) + ")");
        }
        slots_[(head_ + size_) % capacity()] = item;
        ++size_;
    }

    const T& front() const { return slots_[head_]; }

    T pop() {
        if (size_ == 0) throw InvariantViolation("pop from empty channel");
        T out = slots_[head_];
        head_ = (head_ + 1) % capacity();
        --size_;
        ++popped_this_cycle_;
        return out;
    }

    void begin_cycle() { popped_this_cycle_ = 0; }

private:
    std::vector<T> slots_;
    std::size_t head_ = 0;
    std::size_t size_ = 0;
    std::size_t popped_this_cycle_ = 0;
};

}  // namespace skewsim
