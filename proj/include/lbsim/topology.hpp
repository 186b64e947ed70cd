#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lbsim {

// Per-data-center VM allocation policy.
enum class PolicyKind { RoundRobin, Esce, Throttled };

// How a VM executes its admitted tasks.
enum class SchedulingMode { TimeSharedPreemptive, SpaceSharedNonPreemptive };

std::string to_string(PolicyKind p);
std::string to_string(SchedulingMode m);
bool policy_from_string(const std::string& s, PolicyKind& out);
bool mode_from_string(const std::string& s, SchedulingMode& out);

struct VmSpec {
    int id = 0;
    std::int64_t mips = 0;  // machine instructions per second
    std::int64_t memory_bytes = 0;
    std::int64_t bandwidth_bytes = 0;  // bytes per second

    bool operator==(const VmSpec&) const = default;
};

struct UserBase {
    std::string id;  // "UB1"
    int region = 0;
    std::int64_t users_peak = 0;
    std::int64_t users_offpeak = 0;
    int peak_start_hour = 0;  // peak interval [start, end) in hour-of-day, 0..24
    int peak_end_hour = 0;
    double requests_per_user_per_hour = 0.0;
    std::int64_t request_size_bytes = 0;
    std::int64_t request_length_mi = 0;  // machine instructions per request

    bool operator==(const UserBase&) const = default;
};

struct DataCenter {
    std::string id;  // "DC1"
    int region = 0;
    std::vector<VmSpec> vms;

    bool operator==(const DataCenter&) const = default;
};

// Symmetric matrix of one-way network delays between regions, milliseconds.
struct LatencyMatrix {
    int regions = 0;
    std::vector<double> one_way_ms;  // row-major regions x regions

    static LatencyMatrix uniform(int regions, double intra_ms, double inter_ms);

    double at(int i, int j) const { return one_way_ms[static_cast<std::size_t>(i) * regions + j]; }
    void set(int i, int j, double v) { one_way_ms[static_cast<std::size_t>(i) * regions + j] = v; }
    double min_entry() const;

    bool operator==(const LatencyMatrix&) const = default;
};

// Periodic VM availability screening (off in the shipped defaults).
struct AvailabilitySettings {
    bool enabled = false;
    double mp_minutes = 60.0;              // measurement period
    double loss_events_per_period = 1.0;   // expected resource-loss events per period
    double downtime_minutes = 1.0;         // expected downtime per loss event
    double threshold = 0.95;               // minimum acceptable rating

    bool operator==(const AvailabilitySettings&) const = default;
};

// Full scenario description. Immutable once built; safe to share across runs.
struct SimulationConfig {
    int regions = 0;
    std::vector<UserBase> user_bases;
    std::vector<DataCenter> data_centers;
    LatencyMatrix latency;
    PolicyKind policy = PolicyKind::RoundRobin;
    SchedulingMode scheduling_mode = SchedulingMode::TimeSharedPreemptive;
    int throttle_threshold = 1;  // max concurrent tasks per VM (Throttled only)
    double duration_hours = 24.0;
    std::uint64_t seed = 0;
    double jitter_ms = 6.0;  // uniform +/- jitter applied per network leg
    AvailabilitySettings availability;

    bool operator==(const SimulationConfig&) const = default;
};

// One broken invariant: which entity, which rule.
struct Violation {
    std::string entity;
    std::string rule;
};

// Checks every structural invariant; returns the full list of breaches.
// Violations are data, not failures: an empty list means the config is
// simulatable for its whole duration.
std::vector<Violation> validate_config(const SimulationConfig& cfg);

// The shipped reproduction scenario: 6 regions, one user base and one data
// center per region, identical VM fleets, symmetric latency calibrated so an
// unloaded round trip lands near 50 ms.
SimulationConfig default_reference_config();

// Variant of the default scenario with a saturating peak hour, used by the
// policy comparison: one VM per data center, slower VMs, and wide inter-region
// delays so migration cost is visible against execution time.
SimulationConfig overload_compare_config();

}  // namespace lbsim
