#pragma once

namespace lbsim {

// Inputs of the expected-availability estimate: a measurement period of
// mp minutes, loss_events expected resource losses within it, and
// downtime_minutes of expected outage per loss.
struct AvailabilityParams {
    double mp_minutes = 0.0;
    double loss_events = 0.0;
    double downtime_minutes = 0.0;
};

struct AvailabilityRating {
    double a_e = 0.0;     // expected usable fraction of the period, in [0, 1]
    bool clamped = false; // raw value fell outside [0, 1]
};

// a_e = (mp - loss_events * downtime) / mp, clamped into [0, 1] with the clamp
// flagged. Throws std::domain_error when mp <= 0 or a rate is negative.
AvailabilityRating expected_availability(const AvailabilityParams& p);

// Whether the rating meets the threshold (threshold must lie in [0, 1]).
bool is_available(const AvailabilityParams& p, double threshold);

}  // namespace lbsim
