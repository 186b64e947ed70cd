#pragma once

#include <cstdint>
#include <vector>

#include "lbsim/rng.hpp"
#include "lbsim/time.hpp"
#include "lbsim/topology.hpp"

namespace lbsim {

// One unit of user-base traffic and everything measured about it.
struct Request {
    std::int64_t id = -1;
    std::int32_t source_ub = -1;
    SimTime created;
    std::int64_t length_mi = 0;
    std::int64_t size_bytes = 0;

    std::int32_t assigned_dc = -1;
    std::int32_t assigned_vm = -1;
    bool dispatched = false;      // reached a data center
    SimTime first_dc_arrival;     // arrival at the first data center
    SimTime serving_dc_arrival;   // arrival at the data center that served it
    bool started = false;
    SimTime service_start;
    bool finished = false;
    SimTime service_end;
    bool returned_set = false;
    SimTime returned;
    std::int32_t migrations = 0;
    std::uint64_t visited_dcs = 0;  // bitmask over data center indices
    std::int64_t network_ns = 0;    // sum of every traversed network leg
};

// Mean arrival intensity for a user base at the given hour of day, in
// requests per millisecond. Peak population applies inside [peak_start,
// peak_end), the half-open interval convention, off-peak elsewhere.
double arrival_rate_per_ms(const UserBase& ub, int hour_of_day);

// Arrival times of one user base over [t0, t1): inhomogeneous Poisson with
// piecewise-constant hourly rate, realized by thinning against the window's
// maximum rate. Times are strictly inside the window and strictly increasing.
// The stream state threads through, so consecutive windows concatenate into
// one well-formed arrival process.
std::vector<SimTime> generate_arrivals(const UserBase& ub, SimTime t0, SimTime t1,
                                       RngStream& rng);

struct Arrival {
    SimTime time;
    std::int32_t ub = -1;
    std::int64_t request_id = -1;
};

// All user bases over [0, duration): per-base streams (stream id = base
// index), merged by (time, base) and numbered 0..n-1 in that order. Ids are
// therefore unique and reproducible from the seed alone.
std::vector<Arrival> build_arrival_plan(const SimulationConfig& cfg);

}  // namespace lbsim
