#include "lbsim/availability.hpp"

#include <stdexcept>

namespace lbsim {

AvailabilityRating expected_availability(const AvailabilityParams& p) {
    if (p.mp_minutes <= 0.0) {
        throw std::domain_error("availability: measurement period must be positive");
    }
    if (p.loss_events < 0.0 || p.downtime_minutes < 0.0) {
        throw std::domain_error("availability: loss rate and downtime must be non-negative");
    }
    const double raw = (p.mp_minutes - p.loss_events * p.downtime_minutes) / p.mp_minutes;
    AvailabilityRating rating;
    if (raw < 0.0) {
        rating.a_e = 0.0;
        rating.clamped = true;
    } else if (raw > 1.0) {
        rating.a_e = 1.0;
        rating.clamped = true;
    } else {
        rating.a_e = raw;
    }
    return rating;
}

bool is_available(const AvailabilityParams& p, double threshold) {
    if (threshold < 0.0 || threshold > 1.0) {
        throw std::domain_error("availability: threshold must lie in [0, 1]");
    }
    return expected_availability(p).a_e >= threshold;
}

}  // namespace lbsim
