// Copyright 2026 the bcc project contributors. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

namespace bcc::sim {

/// Virtual-time event queue. Time never decreases; events at equal
/// timestamps fire in insertion order (sequence-number tie-break), so a
/// run is a pure function of what was scheduled.
class SimClock {
  public:
    using Action = std::function<void()>;

    std::uint64_t now_ms() const { return now_ms_; }

    void schedule_at(std::uint64_t at_ms, Action action) {
        queue_.push(Event{at_ms < now_ms_ ? now_ms_ : at_ms, next_seq_++, std::move(action)});
    }

    void schedule_after(std::uint64_t delay_ms, Action action) {
        schedule_at(now_ms_ + delay_ms, std::move(action));
    }

    bool empty() const { return queue_.empty(); }
    std::uint64_t next_event_ms() const { return queue_.top().at_ms; }

    /// Fires the next event. Returns false when the queue is drained.
    bool step() {
        if (queue_.empty()) return false;
        Event ev = queue_.top();
        queue_.pop();
        now_ms_ = ev.at_ms;
        ev.action();
        return true;
    }

    /// Runs every event scheduled up to and including `until_ms`.
    void run_until(std::uint64_t until_ms) {
        while (!queue_.empty() && queue_.top().at_ms <= until_ms) step();
        if (now_ms_ < until_ms) now_ms_ = until_ms;
    }

  private:
    struct Event {
        std::uint64_t at_ms;
        std::uint64_t seq;
        Action action;
    };
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            if (a.at_ms != b.at_ms) return a.at_ms > b.at_ms;
            return a.seq > b.seq;
        }
    };

    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::uint64_t now_ms_ = 0;
    std::uint64_t next_seq_ = 0;
};

}  // namespace bcc::sim
