#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "lbsim/time.hpp"
#include "lbsim/topology.hpp"
#include "lbsim/workload.hpp"

namespace lbsim {

// Execution model of one virtual machine.
//
// Time-shared: every admitted task runs concurrently at an equal share of the
// VM's instruction throughput (processor sharing, recomputed at admission and
// completion epochs). Space-shared: one task runs to completion at full rate
// while the rest wait in FIFO order.
//
// Work is accounted in integer micro-instructions and time in integer
// nanoseconds, so a task's executed work equals its length exactly at
// completion and replays are bit-stable.
class VmRuntime {
public:
    VmRuntime(VmSpec spec, SchedulingMode mode);

    struct Started {
        std::int64_t request;
        SimTime at;
    };

    struct NextCompletion {
        bool has = false;
        SimTime at;
        std::int64_t request = -1;
    };

    // Adds a task. Returns the executions that began at `now` (the new task
    // under time sharing or on an idle space-shared VM; nothing when it
    // queued). Admitting a request twice fails loudly.
    std::vector<Started> admit(std::int64_t request, std::int64_t length_mi, SimTime now);

    // Retires `request`, which must be the task due at `now`. Under space
    // sharing the queue head (if any) starts and is reported in the result.
    std::vector<Started> complete(std::int64_t request, SimTime now);

    // Earliest pending completion under the current task set.
    NextCompletion next_completion() const;

    // Bumped by every admit/complete; completion events carry the value they
    // were scheduled under, so stale ones are recognizable.
    std::uint64_t generation() const { return generation_; }

    int active_count() const;         // tasks currently executing
    std::size_t queue_length() const; // space-shared FIFO backlog
    bool idle() const;
    const VmSpec& spec() const { return spec_; }
    SchedulingMode mode() const { return mode_; }

private:
    struct TsTask {
        std::int64_t request;
        std::int64_t remaining_umi;  // micro-instructions left
        std::uint64_t admit_seq;
    };

    struct SsRunning {
        std::int64_t request;
        SimTime completion_at;
    };

    struct SsQueued {
        std::int64_t request;
        std::int64_t length_mi;
    };

    void advance_shares(SimTime now);  // time-shared bookkeeping up to `now`
    void ss_start(std::int64_t request, std::int64_t length_mi, SimTime now);

    VmSpec spec_;
    SchedulingMode mode_;
    std::uint64_t generation_ = 0;
    std::uint64_t admit_seq_ = 0;

    // time-shared
    std::vector<TsTask> ts_active_;
    SimTime ts_last_update_;

    // space-shared
    bool ss_busy_ = false;
    SsRunning ss_running_{};
    std::deque<SsQueued> ss_queue_;
};

// Executed duration in milliseconds; requires both timestamps.
double service_time_ms(const Request& req);

// Waiting before execution at the serving data center, milliseconds.
double queue_wait_ms(const Request& req);

}  // namespace lbsim
