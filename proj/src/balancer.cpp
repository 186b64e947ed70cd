#include "lbsim/balancer.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace lbsim {

int rr_next(RoundRobinState& state, int vm_count) {
    if (vm_count < 1) throw std::logic_error("rr_next: vm_count must be >= 1");
    if (state.next_index >= vm_count) state.next_index = 0;  // fleet shrank
    const int chosen = state.next_index;
    state.next_index = (state.next_index + 1) % vm_count;
    return chosen;
}

std::optional<int> rr_next_masked(RoundRobinState& state, const std::vector<bool>& eligible) {
    const int n = static_cast<int>(eligible.size());
    if (n < 1) throw std::logic_error("rr_next_masked: vm_count must be >= 1");
    if (state.next_index >= n) state.next_index = 0;
    for (int step = 0; step < n; ++step) {
        const int candidate = (state.next_index + step) % n;
        if (eligible[candidate]) {
            state.next_index = (candidate + 1) % n;
            return candidate;
        }
    }
    return std::nullopt;
}

int esce_next(const EsceState& state) {
    if (state.active.empty()) throw std::logic_error("esce_next: no VMs");
    const auto it = std::min_element(state.active.begin(), state.active.end());
    return static_cast<int>(it - state.active.begin());
}

std::optional<int> esce_next_masked(const EsceState& state, const std::vector<bool>& eligible) {
    int best = -1;
    for (int vm = 0; vm < static_cast<int>(state.active.size()); ++vm) {
        if (!eligible[vm]) continue;
        if (best < 0 || state.active[vm] < state.active[best]) best = vm;
    }
    if (best < 0) return std::nullopt;
    return best;
}

std::optional<int> throttled_next(const ThrottledState& state) {
    for (int vm = 0; vm < static_cast<int>(state.active.size()); ++vm) {
        if (state.active[vm] < state.threshold) return vm;
    }
    return std::nullopt;
}

std::optional<int> throttled_next_masked(const ThrottledState& state,
                                         const std::vector<bool>& eligible) {
    for (int vm = 0; vm < static_cast<int>(state.active.size()); ++vm) {
        if (eligible[vm] && state.active[vm] < state.threshold) return vm;
    }
    return std::nullopt;
}

namespace {

void bump(std::vector<int>& counts, int vm, const char* who) {
    if (vm < 0 || vm >= static_cast<int>(counts.size()))
        throw std::logic_error(std::string(who) + ": VM index out of range");
    ++counts[vm];
}

void drop(std::vector<int>& counts, int vm, const char* who) {
    if (vm < 0 || vm >= static_cast<int>(counts.size()))
        throw std::logic_error(std::string(who) + ": VM index out of range");
    if (counts[vm] == 0)
        throw std::logic_error(std::string(who) + ": release without matching allocate on vm " +
                               std::to_string(vm));
    --counts[vm];
}

}  // namespace

void notify_allocate(EsceState& state, int vm) { bump(state.active, vm, "esce"); }
void notify_release(EsceState& state, int vm) { drop(state.active, vm, "esce"); }

void notify_allocate(ThrottledState& state, int vm) {
    bump(state.active, vm, "throttled");
    if (state.active[vm] > state.threshold)
        throw std::logic_error("throttled: allocation past the threshold on vm " +
                               std::to_string(vm));
}

void notify_release(ThrottledState& state, int vm) { drop(state.active, vm, "throttled"); }

BrokerTable build_broker_table(const SimulationConfig& cfg) {
    BrokerTable table;
    table.preference.resize(cfg.user_bases.size());
    for (std::size_t u = 0; u < cfg.user_bases.size(); ++u) {
        std::vector<int> order(cfg.data_centers.size());
        std::iota(order.begin(), order.end(), 0);
        const int ub_region = cfg.user_bases[u].region;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            const double da = cfg.latency.at(ub_region, cfg.data_centers[a].region);
            const double db = cfg.latency.at(ub_region, cfg.data_centers[b].region);
            if (da != db) return da < db;
            return a < b;
        });
        table.preference[u] = std::move(order);
    }
    return table;
}

int broker_select(int ub_index, const BrokerTable& table) {
    return table.preference.at(ub_index).front();
}

}  // namespace lbsim
