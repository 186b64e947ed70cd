#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lbsim/topology.hpp"

namespace lbsim {

// Cyclic cursor over a data center's VMs.
struct RoundRobinState {
    int next_index = 0;
};

// Returns the cursor position, then advances it modulo vm_count.
int rr_next(RoundRobinState& state, int vm_count);

// Like rr_next but skips VMs whose mask entry is false; returns nullopt when
// no VM is eligible. The cursor still advances exactly one step past the
// chosen VM, so eligible VMs keep their cyclic fairness.
std::optional<int> rr_next_masked(RoundRobinState& state, const std::vector<bool>& eligible);

// Equally-spread-current-execution state: in-flight allocations per VM
// (dispatched and not yet completed, queued work included).
struct EsceState {
    std::vector<int> active;
};

// VM with the minimum allocation count; ties go to the lowest id. The caller
// commits the choice with notify_allocate.
int esce_next(const EsceState& state);
std::optional<int> esce_next_masked(const EsceState& state, const std::vector<bool>& eligible);

// Throttled state: per-VM active counts capped by the threshold.
struct ThrottledState {
    std::vector<int> active;
    int threshold = 1;
};

// Lowest-id VM with spare capacity, or nullopt when every VM is saturated
// (the caller then migrates the request toward the next preferred DC).
std::optional<int> throttled_next(const ThrottledState& state);
std::optional<int> throttled_next_masked(const ThrottledState& state,
                                         const std::vector<bool>& eligible);

void notify_allocate(EsceState& state, int vm);
void notify_release(EsceState& state, int vm);  // fails loudly on a zero counter
void notify_allocate(ThrottledState& state, int vm);
void notify_release(ThrottledState& state, int vm);

// Per-user-base preference order over data centers: ascending one-way latency,
// ties by data center index. Each list is a permutation of all DCs.
struct BrokerTable {
    std::vector<std::vector<int>> preference;  // [ub index] -> ordered dc indices
};

BrokerTable build_broker_table(const SimulationConfig& cfg);

// The closest data center for a user base (head of its preference list).
int broker_select(int ub_index, const BrokerTable& table);

}  // namespace lbsim
