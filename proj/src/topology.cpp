#include "lbsim/topology.hpp"

#include <algorithm>
#include <set>

#include "lbsim/availability.hpp"

namespace lbsim {

std::string to_string(PolicyKind p) {
    switch (p) {
        case PolicyKind::RoundRobin: return "rr";
        case PolicyKind::Esce: return "esce";
        case PolicyKind::Throttled: return "throttled";
    }
    return "?";
}

std::string to_string(SchedulingMode m) {
    return m == SchedulingMode::TimeSharedPreemptive ? "ts" : "ss";
}

bool policy_from_string(const std::string& s, PolicyKind& out) {
    if (s == "rr") out = PolicyKind::RoundRobin;
    else if (s == "esce") out = PolicyKind::Esce;
    else if (s == "throttled") out = PolicyKind::Throttled;
    else return false;
    return true;
}

bool mode_from_string(const std::string& s, SchedulingMode& out) {
    if (s == "ts") out = SchedulingMode::TimeSharedPreemptive;
    else if (s == "ss") out = SchedulingMode::SpaceSharedNonPreemptive;
    else return false;
    return true;
}

LatencyMatrix LatencyMatrix::uniform(int regions, double intra_ms, double inter_ms) {
    LatencyMatrix m;
    m.regions = regions;
    m.one_way_ms.assign(static_cast<std::size_t>(regions) * regions, inter_ms);
    for (int i = 0; i < regions; ++i) m.set(i, i, intra_ms);
    return m;
}

double LatencyMatrix::min_entry() const {
    double lowest = one_way_ms.empty() ? 0.0 : one_way_ms.front();
    for (double v : one_way_ms) lowest = std::min(lowest, v);
    return lowest;
}

namespace {

void check_positive_region(const SimulationConfig& cfg, std::vector<Violation>& out) {
    if (cfg.regions < 1) out.push_back({"config", "region count must be at least 1"});
}

void check_user_bases(const SimulationConfig& cfg, std::vector<Violation>& out) {
    std::set<std::string> seen;
    for (const auto& ub : cfg.user_bases) {
        if (!seen.insert(ub.id).second) out.push_back({ub.id, "duplicate user base id"});
        if (ub.region < 0 || ub.region >= cfg.regions)
            out.push_back({ub.id, "region index out of range"});
        if (ub.users_offpeak < 0) out.push_back({ub.id, "off-peak users must be non-negative"});
        if (ub.users_peak < ub.users_offpeak)
            out.push_back({ub.id, "peak users must be at least off-peak users"});
        if (ub.requests_per_user_per_hour < 0.0)
            out.push_back({ub.id, "request rate must be non-negative"});
        if (ub.request_length_mi <= 0) out.push_back({ub.id, "request length must be positive"});
        if (ub.request_size_bytes < 0) out.push_back({ub.id, "request size must be non-negative"});
        if (ub.peak_start_hour < 0 || ub.peak_end_hour > 24 ||
            ub.peak_start_hour > ub.peak_end_hour)
            out.push_back({ub.id, "peak interval must satisfy 0 <= start <= end <= 24"});
    }
}

void check_data_centers(const SimulationConfig& cfg, std::vector<Violation>& out) {
    std::set<std::string> seen;
    for (const auto& dc : cfg.data_centers) {
        if (!seen.insert(dc.id).second) out.push_back({dc.id, "duplicate data center id"});
        if (dc.region < 0 || dc.region >= cfg.regions)
            out.push_back({dc.id, "region index out of range"});
        if (dc.vms.empty()) out.push_back({dc.id, "data center needs at least one VM"});
        for (const auto& vm : dc.vms) {
            const std::string entity = dc.id + "/vm" + std::to_string(vm.id);
            if (vm.mips <= 0) out.push_back({entity, "mips must be positive"});
            if (vm.memory_bytes < 0) out.push_back({entity, "memory must be non-negative"});
            if (vm.bandwidth_bytes < 0) out.push_back({entity, "bandwidth must be non-negative"});
        }
    }
    if (cfg.data_centers.size() > 64)
        out.push_back({"config", "at most 64 data centers are supported"});
}

void check_latency(const SimulationConfig& cfg, std::vector<Violation>& out) {
    const auto& m = cfg.latency;
    if (m.regions != cfg.regions ||
        m.one_way_ms.size() != static_cast<std::size_t>(cfg.regions) * cfg.regions) {
        out.push_back({"latency", "matrix must be regions x regions"});
        return;
    }
    for (int i = 0; i < m.regions; ++i) {
        for (int j = 0; j < m.regions; ++j) {
            if (m.at(i, j) < 0.0) {
                out.push_back({"latency", "delay[" + std::to_string(i) + "][" +
                                              std::to_string(j) + "] must be non-negative"});
            }
            if (j > i && m.at(i, j) != m.at(j, i)) {
                out.push_back({"latency", "matrix must be symmetric at (" + std::to_string(i) +
                                              "," + std::to_string(j) + ")"});
            }
        }
    }
    if (cfg.jitter_ms < 0.0) out.push_back({"config", "jitter must be non-negative"});
    else if (!m.one_way_ms.empty() && cfg.jitter_ms > m.min_entry())
        out.push_back({"config", "jitter must not exceed the smallest one-way delay"});
}

void check_run_params(const SimulationConfig& cfg, std::vector<Violation>& out) {
    if (cfg.duration_hours <= 0.0) out.push_back({"config", "duration must be positive"});
    if (cfg.throttle_threshold < 1) out.push_back({"config", "throttle threshold must be >= 1"});
    if (cfg.availability.enabled) {
        const auto& a = cfg.availability;
        if (a.mp_minutes <= 0.0) {
            out.push_back({"availability", "measurement period must be positive"});
        } else if (a.loss_events_per_period < 0.0 || a.downtime_minutes < 0.0) {
            out.push_back({"availability", "loss rate and downtime must be non-negative"});
        } else if (a.threshold < 0.0 || a.threshold > 1.0) {
            out.push_back({"availability", "threshold must lie in [0, 1]"});
        } else {
            const auto rating = expected_availability(
                {a.mp_minutes, a.loss_events_per_period, a.downtime_minutes});
            if (rating.a_e < a.threshold)
                out.push_back({"availability",
                               "rating below threshold: no VM would ever be usable"});
        }
    }
}

}  // namespace

std::vector<Violation> validate_config(const SimulationConfig& cfg) {
    std::vector<Violation> out;
    check_positive_region(cfg, out);
    check_user_bases(cfg, out);
    check_data_centers(cfg, out);
    check_latency(cfg, out);
    check_run_params(cfg, out);
    return out;
}

SimulationConfig default_reference_config() {
    SimulationConfig cfg;
    cfg.regions = 6;
    cfg.policy = PolicyKind::RoundRobin;
    cfg.scheduling_mode = SchedulingMode::TimeSharedPreemptive;
    cfg.throttle_threshold = 1;
    cfg.duration_hours = 24.0;
    cfg.seed = 0;
    cfg.jitter_ms = 6.0;
    // 25 ms one-way within a region and 100 ms across regions give an
    // unloaded round trip of ~50 ms to the local data center.
    cfg.latency = LatencyMatrix::uniform(6, 25.0, 100.0);

    for (int r = 0; r < 6; ++r) {
        UserBase ub;
        ub.id = "UB" + std::to_string(r + 1);
        ub.region = r;
        ub.users_peak = 1000;
        ub.users_offpeak = 100;
        ub.peak_start_hour = 3;
        ub.peak_end_hour = 9;
        ub.requests_per_user_per_hour = 12.0;
        ub.request_size_bytes = 100;
        ub.request_length_mi = 100;
        cfg.user_bases.push_back(ub);

        DataCenter dc;
        dc.id = "DC" + std::to_string(r + 1);
        dc.region = r;
        for (int v = 0; v < 5; ++v) {
            // 100 MI at 200k MIPS executes in 0.5 ms on an idle VM.
            dc.vms.push_back({v, 200'000, 1'073'741'824LL, 1'000'000});
        }
        cfg.data_centers.push_back(dc);
    }
    return cfg;
}

SimulationConfig overload_compare_config() {
    SimulationConfig cfg = default_reference_config();
    cfg.duration_hours = 3.0;
    // One slow VM per data center (100 MI -> 100 ms) so the peak hour drives
    // every fleet past its threshold-1 concurrency repeatedly, and wide
    // inter-region delays so a migration hop dwarfs one execution.
    cfg.latency = LatencyMatrix::uniform(6, 25.0, 400.0);
    for (auto& dc : cfg.data_centers) {
        dc.vms.assign(1, VmSpec{0, 1'000, 1'073'741'824LL, 1'000'000});
    }
    for (auto& ub : cfg.user_bases) {
        // Peak hour offers ~3 requests/s against a 10/s fleet: utilization
        // stays moderate while instantaneous demand regularly exceeds twice
        // the single threshold-1 slot.
        ub.users_peak = 900;
        ub.users_offpeak = 90;
        ub.peak_start_hour = 1;
        ub.peak_end_hour = 2;
    }
    return cfg;
}

}  // namespace lbsim
