#include "luq/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "luq/errors.hpp"

namespace luq::oracles {

namespace {

// The leading-order expansions assume the stretched coordinate dominates the
// target: |transverse| * growth well above max(1, |x*|, |y*|).
void require_valid(double stretched, const Target& tgt) {
    const double scale = std::max({1.0, std::abs(tgt.x_star), std::abs(tgt.y_star)});
    if (!(stretched > 10.0 * scale))
        throw ValidityError("asymptote not applicable: stretched coordinate " + std::to_string(stretched) +
                            " <= 10 x " + std::to_string(scale));
}

double lambda_of(const MapSpec& map) {
    return std::visit([](const auto& m) { return m.lambda_mult; }, map);
}

// Both asymptote families depend on time only through the growth factor
// G = e^{lambda t} (flows) or lambda^n (maps).
double saddle_leading(double x0, const Target& tgt, const LuqParams& prm, double growth) {
    if (x0 == 0.0)
        throw ValidityError("asymptote undefined on the stable manifold x0 = 0");
    require_valid(std::abs(x0) * growth, tgt);
    if (prm.form == LuqForm::inner_sum)
        return std::pow(std::abs(x0), prm.p) * std::pow(growth, prm.p) + std::pow(std::abs(tgt.y_star), prm.p);
    return std::abs(x0) * growth;
}

double rotated_leading(double a, const Target& tgt, const LuqParams& prm, double growth) {
    if (a == 0.0)
        throw ValidityError("asymptote undefined on the stable manifold a = 0");
    require_valid(std::abs(a) * growth, tgt);
    if (prm.form == LuqForm::inner_sum)
        return 2.0 * std::pow(std::abs(a), prm.p) * std::pow(growth, prm.p);
    return std::pow(2.0, 1.0 / prm.p) * std::abs(a) * growth;
}

} // namespace

State2 saddle_solution(double x0, double y0, double lambda_rate, double t) {
    return {x0 * std::exp(lambda_rate * t), y0 * std::exp(-lambda_rate * t)};
}

State2 rotated_saddle_solution(double x0, double y0, double lambda_rate, double t) {
    const SaddleCoords c = SaddleCoords::from_state({x0, y0});
    const double grow = std::exp(lambda_rate * t);
    const double decay = std::exp(-lambda_rate * t);
    return {c.a * grow + c.b * decay, c.a * grow - c.b * decay};
}

State2 map_solutions(const MapSpec& map, double x0, double y0, std::size_t n) {
    if (n == 0)
        return {x0, y0};
    const double lambda = lambda_of(map);
    const double grow = std::pow(lambda, static_cast<double>(n));
    const double decay = std::pow(lambda, -static_cast<double>(n));
    if (std::holds_alternative<SaddleMap>(map))
        return {x0 * grow, y0 * decay};
    const SaddleCoords c = SaddleCoords::from_state({x0, y0});
    return {c.a * grow + c.b * decay, c.a * grow - c.b * decay};
}

double saddle_luq_asymptote(double x0, const Target& tgt, const LuqParams& prm, double lambda_rate, double t) {
    return saddle_leading(x0, tgt, prm, std::exp(lambda_rate * t));
}

double rotated_luq_asymptote(double a, const Target& tgt, const LuqParams& prm, double lambda_rate, double t) {
    return rotated_leading(a, tgt, prm, std::exp(lambda_rate * t));
}

double map_luq_asymptote(const MapSpec& map, double transverse, const Target& tgt, const LuqParams& prm,
                         std::size_t n) {
    const double growth = std::pow(lambda_of(map), static_cast<double>(n));
    if (std::holds_alternative<SaddleMap>(map))
        return saddle_leading(transverse, tgt, prm, growth);
    return rotated_leading(transverse, tgt, prm, growth);
}

} // namespace luq::oracles
