#pragma once

#include <cstddef>

#include "luq/diagnostics.hpp"
#include "luq/flow_models.hpp"
#include "luq/types.hpp"

// Closed-form solutions of the linear test systems and the leading-order
// behaviour of L_UQ on them. Used as ground truth; nothing here calls the
// integrator.
namespace luq::oracles {

/// Coordinates along the unstable (a) and stable (b) eigendirections of the
/// rotated saddle: a = (x0 + y0)/2, b = (x0 - y0)/2.
struct SaddleCoords {
    double a = 0.0;
    double b = 0.0;

    static SaddleCoords from_state(const State2& s) { return {(s.x + s.y) / 2.0, (s.x - s.y) / 2.0}; }
    State2 to_state() const { return {a + b, a - b}; }
};

/// (x0 e^{lambda t}, y0 e^{-lambda t}).
State2 saddle_solution(double x0, double y0, double lambda_rate, double t);

/// (a e^{lambda t} + b e^{-lambda t}, a e^{lambda t} - b e^{-lambda t}).
State2 rotated_saddle_solution(double x0, double y0, double lambda_rate, double t);

/// n-th iterate of either linear map, with lambda^n in place of e^{lambda t}.
State2 map_solutions(const MapSpec& map, double x0, double y0, std::size_t n);

/// Leading-order L_UQ of the linear saddle for x0 != 0.
///   inner_sum:  |x0|^p e^{lambda p t} + |y*|^p
///   outer_root: |x0| e^{lambda t}
/// Throws ValidityError when |x0| e^{lambda t} <= 10 max(1, |x*|).
double saddle_luq_asymptote(double x0, const Target& tgt, const LuqParams& prm, double lambda_rate, double t);

/// Leading-order L_UQ of the rotated saddle in terms of the unstable coordinate a.
///   inner_sum:  2 |a|^p e^{lambda p t}
///   outer_root: 2^{1/p} |a| e^{lambda t}
double rotated_luq_asymptote(double a, const Target& tgt, const LuqParams& prm, double lambda_rate, double t);

/// Discrete counterpart of the two asymptotes above; `transverse` is x0 for
/// the saddle map and a for the rotated map.
double map_luq_asymptote(const MapSpec& map, double transverse, const Target& tgt, const LuqParams& prm,
                         std::size_t n);

} // namespace luq::oracles
