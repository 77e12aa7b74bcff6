#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "luq/types.hpp"

namespace luq {

class GriddedField;

/// dx/dt = lambda x, dy/dt = -lambda y. Stable manifold x = 0.
struct LinearSaddle {
    double lambda_rate = 1.0;
};

/// dx/dt = lambda y, dy/dt = lambda x. Stable manifold y = -x.
struct RotatedSaddle {
    double lambda_rate = 1.0;
};

/// Periodically forced Duffing oscillator: dx/dt = y, dy/dt = x - x^3 + epsilon sin t.
struct Duffing {
    double epsilon = 0.0;
};

/// Velocity data on a regular grid, interpolated in space and time.
struct Gridded {
    std::shared_ptr<const GriddedField> field;
};

/// Wraps a supplier of (u, v) in m/s so that states are (lon, lat) in
/// degrees and rates come out in degrees per unit time.
struct SphericalWrapped {
    std::function<Velocity2(const State2&, double)> uv;
    double earth_radius = 6.371e6;
};

using FlowSpec = std::variant<LinearSaddle, RotatedSaddle, Duffing, Gridded, SphericalWrapped>;

/// (x, y) -> (lambda x, y / lambda).
struct SaddleMap {
    double lambda_mult = 2.0;
};

/// (x, y) -> A (x, y) with A = 1/(2 lambda) [[lambda^2+1, lambda^2-1], [lambda^2-1, lambda^2+1]].
struct RotatedSaddleMap {
    double lambda_mult = 2.0;
};

using MapSpec = std::variant<SaddleMap, RotatedSaddleMap>;

/// Throws ArgumentError if a parameter invariant is broken (lambda <= 0, missing grid, ...).
void validate(const FlowSpec& flow);
void validate(const MapSpec& map);

/// Right-hand side of the selected system. Autonomous flows ignore t.
/// Throws DomainError for gridded queries outside the data and PoleError for
/// spherical queries at |lat| >= 90.
Velocity2 eval_velocity(const FlowSpec& flow, const State2& s, double t);

/// Same as eval_velocity but reports domain exits as nullopt instead of throwing.
std::optional<Velocity2> try_eval_velocity(const FlowSpec& flow, const State2& s, double t);

/// Spherical kinematics: (u / (R cos phi), v / R) in radians per second.
/// phi is in degrees.
Velocity2 eval_spherical(double u, double v, double phi_deg, double earth_radius);

/// eval_spherical converted to degrees per unit time, the rate used to
/// advance (lon, lat) states.
Velocity2 spherical_rates_deg(double u, double v, double phi_deg, double earth_radius);

State2 map_step(const MapSpec& map, const State2& s);

/// Name used in scenario configs ("linear_saddle", "saddle_map", ...).
std::string flow_name(const FlowSpec& flow);
std::string map_name(const MapSpec& map);

} // namespace luq
