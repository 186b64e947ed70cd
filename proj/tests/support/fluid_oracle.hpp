#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "lbsim/topology.hpp"

namespace lbsim::testing {

struct FluidTask {
    double admit_ms;
    double length_mi;
};

// Small-step fluid reference for VM execution, independent of the event-driven
// implementation: advances in 10 us increments (split at admissions), shares
// capacity equally under time sharing, runs FIFO under space sharing, and
// interpolates the final fraction of a step so completions are not quantized.
// Returns completion times in task order, milliseconds.
inline std::vector<double> fluid_completions(SchedulingMode mode, double mips,
                                             std::vector<FluidTask> tasks,
                                             double step_ms = 0.01) {
    const std::size_t n = tasks.size();
    std::vector<double> completion(n, -1.0);

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return tasks[a].admit_ms < tasks[b].admit_ms;
    });

    std::vector<double> remaining(n);
    for (std::size_t i = 0; i < n; ++i) remaining[i] = tasks[i].length_mi;

    std::vector<std::size_t> active;  // executing (ts: all, ss: at most one)
    std::vector<std::size_t> queue;   // ss backlog
    std::size_t next_admit = 0;
    double now = 0.0;
    if (!order.empty()) now = tasks[order[0]].admit_ms;
    const double mi_per_ms = mips / 1000.0;

    auto admit_due = [&]() {
        while (next_admit < n && tasks[order[next_admit]].admit_ms <= now) {
            const std::size_t idx = order[next_admit++];
            if (mode == SchedulingMode::TimeSharedPreemptive) {
                active.push_back(idx);
            } else if (active.empty()) {
                active.push_back(idx);
            } else {
                queue.push_back(idx);
            }
        }
    };

    std::size_t done = 0;
    admit_due();
    while (done < n) {
        if (active.empty()) {
            now = tasks[order[next_admit]].admit_ms;
            admit_due();
            continue;
        }
        double dt = step_ms;
        if (next_admit < n) dt = std::min(dt, tasks[order[next_admit]].admit_ms - now);

        // Within the step the active set is fixed; completions split it.
        while (dt > 0.0 && !active.empty()) {
            const double share = mi_per_ms / static_cast<double>(
                                                 mode == SchedulingMode::TimeSharedPreemptive
                                                     ? active.size()
                                                     : 1);
            double min_fin = remaining[active[0]] / share;
            for (std::size_t idx : active) min_fin = std::min(min_fin, remaining[idx] / share);
            const double advance = std::min(dt, min_fin);
            for (std::size_t idx : active) remaining[idx] -= share * advance;
            now += advance;
            dt -= advance;
            for (std::size_t pos = 0; pos < active.size();) {
                const std::size_t idx = active[pos];
                if (remaining[idx] <= 1e-9) {
                    completion[idx] = now;
                    ++done;
                    active.erase(active.begin() + static_cast<std::ptrdiff_t>(pos));
                    if (mode == SchedulingMode::SpaceSharedNonPreemptive && !queue.empty()) {
                        active.push_back(queue.front());
                        queue.erase(queue.begin());
                    }
                } else {
                    ++pos;
                }
            }
        }
        admit_due();
    }
    return completion;
}

}  // namespace lbsim::testing
