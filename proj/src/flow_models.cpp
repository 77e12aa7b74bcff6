#include "luq/flow_models.hpp"

#include <cmath>
#include <numbers>

#include "luq/errors.hpp"
#include "luq/gridded_data.hpp"

namespace luq {

namespace {

template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

Velocity2 duffing_rhs(double epsilon, const State2& s, double t) {
    return {s.y, s.x - s.x * s.x * s.x + epsilon * std::sin(t)};
}

} // namespace

void validate(const FlowSpec& flow) {
    std::visit(overloaded{
                   [](const LinearSaddle& f) {
                       if (!(f.lambda_rate > 0.0))
                           throw ArgumentError("linear_saddle: lambda must be > 0");
                   },
                   [](const RotatedSaddle& f) {
                       if (!(f.lambda_rate > 0.0))
                           throw ArgumentError("rotated_saddle: lambda must be > 0");
                   },
                   [](const Duffing& f) {
                       if (!(f.epsilon >= 0.0))
                           throw ArgumentError("duffing: epsilon must be >= 0");
                   },
                   [](const Gridded& f) {
                       if (!f.field)
                           throw ArgumentError("gridded: no velocity data attached");
                   },
                   [](const SphericalWrapped& f) {
                       if (!f.uv)
                           throw ArgumentError("spherical: no velocity supplier attached");
                       if (!(f.earth_radius > 0.0))
                           throw ArgumentError("spherical: earth_radius must be > 0");
                   },
               },
               flow);
}

void validate(const MapSpec& map) {
    const double lambda = std::visit([](const auto& m) { return m.lambda_mult; }, map);
    if (!(lambda > 1.0))
        throw ArgumentError(map_name(map) + ": lambda must be > 1");
}

Velocity2 eval_spherical(double u, double v, double phi_deg, double earth_radius) {
    if (!(std::abs(phi_deg) < 90.0))
        throw PoleError(phi_deg);
    const double phi = phi_deg * (std::numbers::pi / 180.0);
    return {u / (earth_radius * std::cos(phi)), v / earth_radius};
}

Velocity2 spherical_rates_deg(double u, double v, double phi_deg, double earth_radius) {
    const Velocity2 rad = eval_spherical(u, v, phi_deg, earth_radius);
    return {rad.dx_dt * kRadToDeg, rad.dy_dt * kRadToDeg};
}

Velocity2 eval_velocity(const FlowSpec& flow, const State2& s, double t) {
    return std::visit(
        overloaded{
            [&](const LinearSaddle& f) -> Velocity2 { return {f.lambda_rate * s.x, -f.lambda_rate * s.y}; },
            [&](const RotatedSaddle& f) -> Velocity2 { return {f.lambda_rate * s.y, f.lambda_rate * s.x}; },
            [&](const Duffing& f) { return duffing_rhs(f.epsilon, s, t); },
            [&](const Gridded& f) { return interp_velocity(*f.field, s, t); },
            [&](const SphericalWrapped& f) {
                const Velocity2 uv = f.uv(s, t);
                return spherical_rates_deg(uv.dx_dt, uv.dy_dt, s.y, f.earth_radius);
            },
        },
        flow);
}

std::optional<Velocity2> try_eval_velocity(const FlowSpec& flow, const State2& s, double t) {
    if (const auto* g = std::get_if<Gridded>(&flow))
        return try_interp_velocity(*g->field, s, t);
    if (std::holds_alternative<SphericalWrapped>(flow)) {
        if (!(std::abs(s.y) < 90.0))
            return std::nullopt;
        try {
            return eval_velocity(flow, s, t);
        } catch (const DomainError&) {
            return std::nullopt;
        }
    }
    return eval_velocity(flow, s, t);
}

State2 map_step(const MapSpec& map, const State2& s) {
    return std::visit(overloaded{
                          [&](const SaddleMap& m) -> State2 { return {m.lambda_mult * s.x, s.y / m.lambda_mult}; },
                          [&](const RotatedSaddleMap& m) -> State2 {
                              const double l2 = m.lambda_mult * m.lambda_mult;
                              const double diag = (l2 + 1.0) / (2.0 * m.lambda_mult);
                              const double off = (l2 - 1.0) / (2.0 * m.lambda_mult);
                              return {diag * s.x + off * s.y, off * s.x + diag * s.y};
                          },
                      },
                      map);
}

std::string flow_name(const FlowSpec& flow) {
    return std::visit(overloaded{
                          [](const LinearSaddle&) { return "linear_saddle"; },
                          [](const RotatedSaddle&) { return "rotated_saddle"; },
                          [](const Duffing&) { return "duffing"; },
                          [](const Gridded&) { return "gridded"; },
                          [](const SphericalWrapped&) { return "spherical"; },
                      },
                      flow);
}

std::string map_name(const MapSpec& map) {
    return std::holds_alternative<SaddleMap>(map) ? "saddle_map" : "rotated_saddle_map";
}

} // namespace luq
