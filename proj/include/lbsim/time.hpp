#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace lbsim {

// Simulation clock value. Fixed-point: integer nanoseconds since run start.
// Integer representation gives exact equality for event tie-breaking and
// byte-identical replay; nanosecond resolution keeps rounding far below
// every tolerance used in the metric pipeline.
class SimTime {
public:
    constexpr SimTime() = default;

    static constexpr SimTime from_ns(std::int64_t ns) { return SimTime{ns}; }
    static constexpr SimTime from_us(std::int64_t us) { return SimTime{us * 1000}; }
    static SimTime from_ms(double ms);
    static SimTime from_hours(double hours);
    static constexpr SimTime max() { return SimTime{std::numeric_limits<std::int64_t>::max()}; }

    constexpr std::int64_t ns() const { return ns_; }
    double millis() const { return static_cast<double>(ns_) / 1e6; }
    double hours() const { return static_cast<double>(ns_) / kNsPerHourD; }

    // Hour-of-day index for diurnal rate lookup (clock starts at hour 0).
    int hour_of_day() const { return static_cast<int>((ns_ / kNsPerHour) % 24); }
    // Hour bucket since simulation start (0-based).
    std::int64_t hour_index() const { return ns_ / kNsPerHour; }

    constexpr bool operator==(const SimTime&) const = default;
    constexpr bool operator<(const SimTime& o) const { return ns_ < o.ns_; }
    constexpr bool operator<=(const SimTime& o) const { return ns_ <= o.ns_; }
    constexpr bool operator>(const SimTime& o) const { return ns_ > o.ns_; }
    constexpr bool operator>=(const SimTime& o) const { return ns_ >= o.ns_; }

    constexpr SimTime operator+(SimTime o) const { return SimTime{ns_ + o.ns_}; }
    constexpr SimTime operator-(SimTime o) const { return SimTime{ns_ - o.ns_}; }

    static constexpr std::int64_t kNsPerHour = 3'600'000'000'000LL;

private:
    static constexpr double kNsPerHourD = 3.6e12;

    constexpr explicit SimTime(std::int64_t ns) : ns_(ns) {}
    std::int64_t ns_ = 0;
};

inline SimTime SimTime::from_ms(double ms) {
    return SimTime{static_cast<std::int64_t>(std::llround(ms * 1e6))};
}

inline SimTime SimTime::from_hours(double hours) {
    return SimTime{static_cast<std::int64_t>(std::llround(hours * kNsPerHourD))};
}

}  // namespace lbsim
