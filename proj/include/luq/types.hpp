#pragma once

#include <cmath>
#include <limits>

namespace luq {

/// A point in the plane. Under spherical geometry x is longitude and y is
/// latitude, both in degrees.
struct State2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const State2&, const State2&) = default;
};

/// Rate of change of a State2 per unit time.
struct Velocity2 {
    double dx_dt = 0.0;
    double dy_dt = 0.0;

    friend bool operator==(const Velocity2&, const Velocity2&) = default;
};

inline bool is_finite(const State2& s) { return std::isfinite(s.x) && std::isfinite(s.y); }

inline double speed(const Velocity2& v) { return std::hypot(v.dx_dt, v.dy_dt); }

/// Integration interval; t_end < t_start means backward in time.
struct TimeWindow {
    double t_start = 0.0;
    double t_end = 0.0;

    double length() const { return std::abs(t_end - t_start); }
    bool forward() const { return t_end > t_start; }
};

/// Final observed state against which the uncertainty of a trajectory is measured.
struct Target {
    double x_star = 0.0;
    double y_star = 0.0;
};

// Diagnostics that cannot be evaluated (trajectory left the data domain)
// carry this marker instead of a partial value.
inline constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

inline bool is_undefined(double value) { return std::isnan(value); }

} // namespace luq
