#include "luq/trajectory.hpp"

#include <cmath>

#include "luq/errors.hpp"

namespace luq {

namespace {

State2 advance(const State2& s, double scale, const Velocity2& v) {
    return {s.x + scale * v.dx_dt, s.y + scale * v.dy_dt};
}

// Number of steps of size h covering `span`; a remainder below 1e-9 h is
// treated as round-off rather than an extra sliver step.
std::size_t step_count(double span, double h) {
    return static_cast<std::size_t>(std::ceil(span / h - 1e-9));
}

struct Rk4Result {
    State2 state;
    double arc = 0.0;
};

std::optional<Rk4Result> rk4_step(const FlowSpec& flow, const State2& s, double t, double dt) {
    const auto k1 = try_eval_velocity(flow, s, t);
    if (!k1)
        return std::nullopt;
    const auto k2 = try_eval_velocity(flow, advance(s, 0.5 * dt, *k1), t + 0.5 * dt);
    if (!k2)
        return std::nullopt;
    const auto k3 = try_eval_velocity(flow, advance(s, 0.5 * dt, *k2), t + 0.5 * dt);
    if (!k3)
        return std::nullopt;
    const auto k4 = try_eval_velocity(flow, advance(s, dt, *k3), t + dt);
    if (!k4)
        return std::nullopt;

    const double w = dt / 6.0;
    Rk4Result r;
    r.state = {s.x + w * (k1->dx_dt + 2.0 * k2->dx_dt + 2.0 * k3->dx_dt + k4->dx_dt),
               s.y + w * (k1->dy_dt + 2.0 * k2->dy_dt + 2.0 * k3->dy_dt + k4->dy_dt)};
    r.arc = std::abs(w) * (speed(*k1) + 2.0 * speed(*k2) + 2.0 * speed(*k3) + speed(*k4));
    return r;
}

} // namespace

double default_step(const TimeWindow& w) { return w.length() / 5000.0; }

Trajectory integrate(const FlowSpec& flow, const State2& s0, const TimeWindow& w, double h, Recording rec) {
    if (!std::isfinite(w.t_start) || !std::isfinite(w.t_end) || w.t_start == w.t_end)
        throw ArgumentError("integration window must be finite and non-empty");
    if (!(h > 0.0) || !std::isfinite(h))
        throw ArgumentError("step h must be positive");
    const double span = w.length();
    if (h > span)
        throw ArgumentError("step h exceeds the integration window");
    if (!is_finite(s0))
        throw IntegrationError("non-finite initial state");

    const double dir = w.forward() ? 1.0 : -1.0;
    const std::size_t n = step_count(span, h);

    Trajectory traj;
    if (rec == Recording::full_path) {
        traj.times.reserve(n + 1);
        traj.states.reserve(n + 1);
    }
    traj.times.push_back(w.t_start);
    traj.states.push_back(s0);

    State2 s = s0;
    double t = w.t_start;
    double arc = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        const double t_next = k == n ? w.t_end : w.t_start + dir * static_cast<double>(k) * h;
        const auto step = rk4_step(flow, s, t, t_next - t);
        if (!step) {
            traj.truncated = true;
            break;
        }
        if (!is_finite(step->state))
            throw IntegrationError("state became non-finite at t=" + std::to_string(t_next));
        s = step->state;
        t = t_next;
        arc += step->arc;
        if (rec == Recording::full_path) {
            traj.times.push_back(t);
            traj.states.push_back(s);
        }
    }
    if (rec == Recording::endpoints && t != w.t_start) {
        traj.times.push_back(t);
        traj.states.push_back(s);
    }
    traj.arc_length = arc;
    return traj;
}

Trajectory iterate_map(const MapSpec& map, const State2& s0, std::size_t n) {
    Trajectory traj;
    traj.times.reserve(n + 1);
    traj.states.reserve(n + 1);
    traj.times.push_back(0.0);
    traj.states.push_back(s0);
    State2 s = s0;
    for (std::size_t k = 1; k <= n; ++k) {
        const State2 next = map_step(map, s);
        if (!is_finite(next))
            throw IntegrationError("map iterate became non-finite at n=" + std::to_string(k));
        traj.arc_length += std::hypot(next.x - s.x, next.y - s.y);
        s = next;
        traj.times.push_back(static_cast<double>(k));
        traj.states.push_back(s);
    }
    return traj;
}

} // namespace luq
