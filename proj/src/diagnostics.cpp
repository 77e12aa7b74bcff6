#include "luq/diagnostics.hpp"

#include <cmath>
#include <numbers>

#include "luq/errors.hpp"
#include "luq/trajectory.hpp"

namespace luq {

void validate(const LuqParams& prm) {
    if (!std::isfinite(prm.p))
        throw ArgumentError("L_UQ exponent p must be finite");
    if (prm.form == LuqForm::outer_root && !(prm.p > 1.0))
        throw ArgumentError("outer_root L_UQ requires p > 1");
    if (prm.form == LuqForm::inner_sum && !(prm.p > 0.0 && prm.p <= 1.0))
        throw ArgumentError("inner_sum L_UQ requires 0 < p <= 1");
}

void validate(const BlobSpec& blob) {
    if (!(blob.radius > 0.0) || !std::isfinite(blob.radius))
        throw ArgumentError("blob radius must be positive");
    if (blob.n_points < 3)
        throw ArgumentError("blob needs at least 3 boundary points");
    if (!is_finite(blob.center))
        throw ArgumentError("blob centre must be finite");
}

double luq_pointwise(const State2& x_final, const Target& tgt, const LuqParams& prm) {
    const double dx = std::abs(x_final.x - tgt.x_star);
    const double dy = std::abs(x_final.y - tgt.y_star);
    if (prm.form == LuqForm::outer_root) {
        if (prm.p == 2.0)
            return std::sqrt(dx * dx + dy * dy);
        return std::pow(std::pow(dx, prm.p) + std::pow(dy, prm.p), 1.0 / prm.p);
    }
    if (prm.p == 1.0)
        return dx + dy;
    return std::pow(dx, prm.p) + std::pow(dy, prm.p);
}

double luq_trajectory(const FlowSpec& flow, const State2& s0, const TimeWindow& w, const Target& tgt,
                      const LuqParams& prm, double h) {
    if (!w.forward())
        throw ArgumentError("luq_trajectory needs a forward window");
    const Trajectory traj = integrate(flow, s0, w, h, Recording::endpoints);
    if (traj.truncated)
        return kUndefined;
    return luq_pointwise(traj.final_state(), tgt, prm);
}

double luq_map(const MapSpec& map, const State2& s0, std::size_t n, const Target& tgt, const LuqParams& prm) {
    if (n < 1)
        throw ArgumentError("luq_map needs at least one iteration");
    State2 s = s0;
    for (std::size_t k = 0; k < n; ++k)
        s = map_step(map, s);
    return luq_pointwise(s, tgt, prm);
}

State2 centroid(std::span<const State2> points) {
    if (points.empty())
        throw ArgumentError("centroid of an empty point set");
    double sx = 0.0, sy = 0.0;
    for (const State2& p : points) {
        sx += p.x;
        sy += p.y;
    }
    const auto n = static_cast<double>(points.size());
    return {sx / n, sy / n};
}

std::vector<State2> blob_samples(const BlobSpec& blob) {
    validate(blob);
    std::vector<State2> pts;
    pts.reserve(blob.n_points + 1);
    pts.push_back(blob.center);
    for (std::size_t k = 0; k < blob.n_points; ++k) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(blob.n_points);
        pts.push_back({blob.center.x + blob.radius * std::cos(theta), blob.center.y + blob.radius * std::sin(theta)});
    }
    return pts;
}

double blob_error(const FlowSpec& flow, const BlobSpec& blob, const TimeWindow& w, const Target& target_centroid,
                  double h) {
    if (!w.forward())
        throw ArgumentError("blob_error needs a forward window");
    std::vector<State2> advected;
    for (const State2& p : blob_samples(blob)) {
        const Trajectory traj = integrate(flow, p, w, h, Recording::endpoints);
        if (traj.truncated)
            return kUndefined;
        advected.push_back(traj.final_state());
    }
    const State2 c = centroid(advected);
    const double dx = c.x - target_centroid.x_star;
    const double dy = c.y - target_centroid.y_star;
    return std::sqrt(dx * dx + dy * dy);
}

double m_descriptor(const FlowSpec& flow, const State2& s0, double t0, double tau, DescriptorMode mode, double h) {
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw ArgumentError("descriptor window tau must be positive");

    auto arc = [&](double t_end) {
        const Trajectory traj = integrate(flow, s0, {t0, t_end}, h, Recording::endpoints);
        return traj.truncated ? kUndefined : traj.arc_length;
    };
    switch (mode) {
    case DescriptorMode::forward:
        return arc(t0 + tau);
    case DescriptorMode::backward:
        return arc(t0 - tau);
    case DescriptorMode::both:
        return arc(t0 + tau) + arc(t0 - tau);
    }
    return kUndefined;
}

double m_average(const FlowSpec& flow, const State2& s0, double t0, double tau, double h) {
    return m_descriptor(flow, s0, t0, tau, DescriptorMode::both, h) / (2.0 * tau);
}

double displacement_D(const State2& s0, const State2& s_final) {
    const double dx = s_final.x - s0.x;
    const double dy = s_final.y - s0.y;
    return std::sqrt(dx * dx + dy * dy);
}

} // namespace luq
