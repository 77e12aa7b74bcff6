#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "luq/errors.hpp"
#include "luq/gridded_data.hpp"
#include "luq/oracles.hpp"
#include "luq/trajectory.hpp"

using namespace luq;

namespace {

FlowSpec uniform_grid_flow(double u, double v, double half_width) {
    GridAxes axes;
    axes.nx = axes.ny = 3;
    axes.x0 = axes.y0 = -half_width;
    axes.dx = axes.dy = half_width;
    std::vector<double> us(9, u), vs(9, v);
    return Gridded{std::make_shared<const GriddedField>(axes, Geometry::planar, 0.0, us, vs)};
}

double endpoint_error(double h) {
    const Trajectory traj = integrate(LinearSaddle{1.0}, {0.3, 0.7}, {0.0, 2.0}, h);
    const State2 exact = oracles::saddle_solution(0.3, 0.7, 1.0, 2.0);
    return std::hypot(traj.final_state().x - exact.x, traj.final_state().y - exact.y);
}

} // namespace

TEST_CASE("integrate examples") {
    SUBCASE("zero gridded field is stationary") {
        const Trajectory traj = integrate(uniform_grid_flow(0.0, 0.0, 10.0), {0.4, -0.2}, {0.0, 5.0}, 0.1);
        CHECK(traj.final_state() == State2{0.4, -0.2});
        CHECK(traj.arc_length == 0.0);
        CHECK_FALSE(traj.truncated);
        CHECK(traj.times.back() == 5.0);
    }
    SUBCASE("linear saddle against the closed form") {
        const Trajectory traj = integrate(LinearSaddle{1.0}, {0.1, 1.0}, {0.0, 1.0}, 1e-3);
        // 0.1 e and e^-1 (mpmath, 30 digits).
        CHECK(std::abs(traj.final_state().x - 0.271828182845904523536) <= 1e-9);
        CHECK(std::abs(traj.final_state().y - 0.367879441171442321596) <= 1e-9);
    }
    SUBCASE("unforced duffing equilibrium") {
        const Trajectory traj = integrate(Duffing{0.0}, {1.0, 0.0}, {0.0, 10.0}, 1e-3);
        CHECK(std::abs(traj.final_state().x - 1.0) <= 1e-9);
        CHECK(std::abs(traj.final_state().y) <= 1e-9);
    }
}

TEST_CASE("integrate step bookkeeping") {
    SUBCASE("final partial step lands on t_end") {
        const Trajectory traj = integrate(LinearSaddle{1.0}, {1.0, 1.0}, {0.0, 1.0}, 0.3);
        REQUIRE(traj.times.size() == 5);
        CHECK(traj.times[3] == doctest::Approx(0.9));
        CHECK(traj.times.back() == 1.0);
    }
    SUBCASE("backward window has decreasing times") {
        const Trajectory traj = integrate(LinearSaddle{1.0}, {1.0, 1.0}, {2.0, 0.0}, 0.5);
        REQUIRE(traj.times.size() == 5);
        for (std::size_t k = 1; k < traj.times.size(); ++k)
            CHECK(traj.times[k] < traj.times[k - 1]);
        CHECK(traj.times.back() == 0.0);
    }
    SUBCASE("endpoint recording keeps the same final state") {
        const TimeWindow w{0.0, 3.0};
        const Trajectory full = integrate(Duffing{0.1}, {0.2, 0.3}, w, 1e-2);
        const Trajectory ends = integrate(Duffing{0.1}, {0.2, 0.3}, w, 1e-2, Recording::endpoints);
        CHECK(ends.states.size() == 2);
        CHECK(ends.final_state() == full.final_state());
        CHECK(ends.arc_length == full.arc_length);
    }
    SUBCASE("argument errors") {
        CHECK_THROWS_AS(integrate(LinearSaddle{1.0}, {0, 0}, {0.0, 0.0}, 0.1), ArgumentError);
        CHECK_THROWS_AS(integrate(LinearSaddle{1.0}, {0, 0}, {0.0, 1.0}, 0.0), ArgumentError);
        CHECK_THROWS_AS(integrate(LinearSaddle{1.0}, {0, 0}, {0.0, 1.0}, 2.0), ArgumentError);
        CHECK_THROWS_AS(integrate(LinearSaddle{1.0}, {NAN, 0}, {0.0, 1.0}, 0.1), IntegrationError);
    }
    SUBCASE("blow-up is an integration error") {
        CHECK_THROWS_AS(integrate(Duffing{0.0}, {1e100, 0.0}, {0.0, 1.0}, 0.5), IntegrationError);
    }
    SUBCASE("default step") { CHECK(default_step({0.0, 10.0}) == 10.0 / 5000.0); }
}

TEST_CASE("domain exit truncates and flags") {
    const FlowSpec flow = uniform_grid_flow(1.0, 0.0, 1.0);
    const Trajectory traj = integrate(flow, {0.0, 0.0}, {0.0, 5.0}, 0.1);
    CHECK(traj.truncated);
    CHECK(traj.final_state().x <= 1.0);
    CHECK(traj.final_state().x >= 0.85);
    CHECK(traj.times.back() < 5.0);
    CHECK(traj.arc_length == doctest::Approx(traj.final_state().x).epsilon(1e-12));
}

TEST_CASE("uniform gridded flow arc length") {
    const Trajectory traj = integrate(uniform_grid_flow(1.0, 0.0, 5.0), {0.0, 0.0}, {0.0, 2.0}, 0.01);
    CHECK(traj.arc_length == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(traj.final_state().x == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("RK4 global error is fourth order") {
    const double coarse = endpoint_error(1e-2);
    const double fine = endpoint_error(5e-3);
    MESSAGE("error(1e-2)=" << coarse << " error(5e-3)=" << fine << " ratio=" << coarse / fine);
    CHECK(coarse / fine >= 14.0);
}

TEST_CASE("time reversal") {
    const FlowSpec flows[] = {LinearSaddle{1.0}, RotatedSaddle{0.8}, Duffing{0.0}};
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    for (const FlowSpec& flow : flows) {
        for (int k = 0; k < 5; ++k) {
            const State2 s0{coord(rng), coord(rng)};
            const Trajectory fwd = integrate(flow, s0, {0.0, 2.0}, 1e-3);
            const Trajectory bwd = integrate(flow, fwd.final_state(), {2.0, 0.0}, 1e-3);
            CHECK(std::hypot(bwd.final_state().x - s0.x, bwd.final_state().y - s0.y) <= 1e-8);
            CHECK(std::abs(fwd.arc_length - bwd.arc_length) <= 1e-8);
        }
    }
}

TEST_CASE("integration is bit-reproducible") {
    const Trajectory a = integrate(Duffing{0.1}, {0.1, 0.1}, {0.0, 10.0}, 2e-3);
    const Trajectory b = integrate(Duffing{0.1}, {0.1, 0.1}, {0.0, 10.0}, 2e-3);
    CHECK(a.final_state() == b.final_state());
    CHECK(a.arc_length == b.arc_length);
}

TEST_CASE("iterate_map examples") {
    SUBCASE("n = 0") {
        const Trajectory orbit = iterate_map(SaddleMap{2.0}, {0.3, 0.4}, 0);
        REQUIRE(orbit.states.size() == 1);
        CHECK(orbit.states[0] == State2{0.3, 0.4});
        CHECK(orbit.arc_length == 0.0);
    }
    SUBCASE("saddle map") {
        const Trajectory orbit = iterate_map(SaddleMap{2.0}, {1.0, 1.0}, 3);
        CHECK(orbit.final_state() == State2{8.0, 0.125});
        CHECK(orbit.times.back() == 3.0);
        // |(1,-0.5)| + |(2,-0.25)| + |(4,-0.125)|
        CHECK(orbit.arc_length ==
              doctest::Approx(std::hypot(1.0, 0.5) + std::hypot(2.0, 0.25) + std::hypot(4.0, 0.125)));
    }
    SUBCASE("rotated map on the stable direction") {
        const Trajectory orbit = iterate_map(RotatedSaddleMap{2.0}, {1.0, -1.0}, 4);
        CHECK(orbit.final_state().x == doctest::Approx(0.0625).epsilon(1e-15));
        CHECK(orbit.final_state().y == doctest::Approx(-0.0625).epsilon(1e-15));
    }
}

TEST_CASE("iterate_map equals repeated map_step") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    for (int k = 0; k < 100; ++k) {
        const MapSpec map = k % 2 ? MapSpec{SaddleMap{1.7}} : MapSpec{RotatedSaddleMap{1.3}};
        const State2 s0{coord(rng), coord(rng)};
        const Trajectory orbit = iterate_map(map, s0, 12);
        State2 s = s0;
        for (std::size_t n = 0; n <= 12; ++n) {
            CHECK(orbit.states[n] == s);
            s = map_step(map, s);
        }
    }
}
