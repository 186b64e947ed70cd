#pragma once

#include <cstdint>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "lbsim/time.hpp"

namespace lbsim {

enum class EventKind : std::uint8_t {
    Arrival,
    DispatchToDc,
    AssignToVm,
    TaskComplete,
    ResponseReturn,
    MigrateRequest,
    HourBoundary,
};

const char* to_string(EventKind k);

// Timestamped occurrence. (time, seq) is unique per run; seq is assigned by
// the queue in insertion order and breaks timestamp ties deterministically.
struct Event {
    SimTime time;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::Arrival;
    std::int64_t request = -1;
    std::int32_t ub = -1;
    std::int32_t dc = -1;
    std::int32_t vm = -1;
    std::int32_t hour = -1;
    std::uint64_t generation = 0;  // stale-completion detection
};

// Scheduling into the past is a programming error, not an input error.
class SchedulingError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Min-ordered on (time, seq): pop order is lexicographic, so equal-time events
// come out in insertion order.
class EventQueue {
public:
    void push(Event e) {
        e.seq = next_seq_++;
        heap_.push(e);
    }

    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }
    const Event& top() const { return heap_.top(); }

    Event pop() {
        Event e = heap_.top();
        heap_.pop();
        return e;
    }

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            if (a.time != b.time) return b.time < a.time;
            return b.seq < a.seq;
        }
    };

    std::priority_queue<Event, std::vector<Event>, Later> heap_;
    std::uint64_t next_seq_ = 0;
};

struct EngineStats {
    std::uint64_t scheduled = 0;
    std::uint64_t processed = 0;
};

// Single-threaded event loop: a clock plus the queue. Handlers run with the
// clock set to the event time and may schedule further events (never into the
// past). Independent engines on different threads share nothing.
class EventEngine {
public:
    SimTime now() const { return clock_; }
    const EngineStats& stats() const { return stats_; }
    std::size_t pending() const { return queue_.size(); }

    void schedule(Event e) {
        if (e.time < clock_) {
            throw SchedulingError("event scheduled into the past: t=" +
                                  std::to_string(e.time.ns()) + "ns < clock=" +
                                  std::to_string(clock_.ns()) + "ns (" +
                                  to_string(e.kind) + ")");
        }
        queue_.push(e);
        ++stats_.scheduled;
    }

    // Processes every event with time <= until, in (time, seq) order. Returns
    // the final clock: `until` when finite, else the last processed time.
    template <typename Handler>
    SimTime run(Handler&& handler, SimTime until = SimTime::max()) {
        while (!queue_.empty() && queue_.top().time <= until) {
            Event e = queue_.pop();
            if (e.time < clock_) {
                throw SchedulingError("event queue yielded a time before the clock");
            }
            clock_ = e.time;
            ++stats_.processed;
            handler(e);
        }
        if (until != SimTime::max() && until > clock_) clock_ = until;
        return clock_;
    }

private:
    EventQueue queue_;
    SimTime clock_;
    EngineStats stats_;
};

}  // namespace lbsim
