#include "lbsim/workload.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lbsim {

double arrival_rate_per_ms(const UserBase& ub, int hour_of_day) {
    const bool peak = hour_of_day >= ub.peak_start_hour && hour_of_day < ub.peak_end_hour;
    const double users = static_cast<double>(peak ? ub.users_peak : ub.users_offpeak);
    return users * ub.requests_per_user_per_hour / 3'600'000.0;
}

std::vector<SimTime> generate_arrivals(const UserBase& ub, SimTime t0, SimTime t1,
                                       RngStream& rng) {
    if (!(t0 < t1)) throw std::invalid_argument("generate_arrivals: window must be non-empty");

    // Thinning against the window's peak rate; the hourly profile is
    // piecewise constant so the acceptance ratio is exact.
    double max_rate = 0.0;
    for (std::int64_t h = t0.hour_index(); h * SimTime::kNsPerHour < t1.ns(); ++h) {
        const int hour_of_day = static_cast<int>(h % 24);
        max_rate = std::max(max_rate, arrival_rate_per_ms(ub, hour_of_day));
    }

    std::vector<SimTime> arrivals;
    if (max_rate <= 0.0) return arrivals;

    const double mean_gap_ms = 1.0 / max_rate;
    double t_ms = t0.millis();
    const double end_ms = t1.millis();
    std::int64_t prev_ns = t0.ns();
    while (true) {
        t_ms += rng.exponential(mean_gap_ms);
        if (t_ms >= end_ms) break;
        std::int64_t ns = static_cast<std::int64_t>(std::llround(t_ms * 1e6));
        if (ns <= prev_ns) ns = prev_ns + 1;  // keep times strictly increasing
        if (ns >= t1.ns()) break;
        const SimTime at = SimTime::from_ns(ns);
        const double rate_here = arrival_rate_per_ms(ub, at.hour_of_day());
        if (rng.next_u01() < rate_here / max_rate) {
            arrivals.push_back(at);
            prev_ns = ns;
        }
    }
    return arrivals;
}

std::vector<Arrival> build_arrival_plan(const SimulationConfig& cfg) {
    const SimTime end = SimTime::from_hours(cfg.duration_hours);
    std::vector<Arrival> plan;
    for (std::size_t u = 0; u < cfg.user_bases.size(); ++u) {
        RngStream rng(cfg.seed, u);
        for (SimTime at : generate_arrivals(cfg.user_bases[u], SimTime{}, end, rng)) {
            plan.push_back({at, static_cast<std::int32_t>(u), -1});
        }
    }
    std::stable_sort(plan.begin(), plan.end(), [](const Arrival& a, const Arrival& b) {
        if (a.time != b.time) return a.time < b.time;
        return a.ub < b.ub;
    });
    for (std::size_t i = 0; i < plan.size(); ++i) plan[i].request_id = static_cast<std::int64_t>(i);
    return plan;
}

}  // namespace lbsim
