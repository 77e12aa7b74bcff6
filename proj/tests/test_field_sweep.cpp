#include <doctest.h>

#include <cmath>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "luq/errors.hpp"
#include "luq/field_sweep.hpp"

using namespace luq;

namespace {

FlowSpec still_grid_flow() {
    GridAxes axes;
    axes.nx = axes.ny = 2;
    axes.x0 = axes.y0 = -5.0;
    axes.dx = axes.dy = 10.0;
    std::vector<double> zeros(4, 0.0);
    return Gridded{std::make_shared<const GriddedField>(axes, Geometry::planar, 0.0, zeros, zeros)};
}

ScalarField2D field_from(const GridSpec& grid, double (*f)(double, double)) {
    return sweep(grid, [f](const State2& s) { return f(s.x, s.y); });
}

bool same_bits(const ScalarField2D& a, const ScalarField2D& b) {
    if (a.values.size() != b.values.size())
        return false;
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        const double x = a.values[k], y = b.values[k];
        if (!(x == y || (std::isnan(x) && std::isnan(y))))
            return false;
    }
    return true;
}

DiagnosticSpec luq_spec(double p = 2.0) {
    DiagnosticSpec spec;
    spec.kind = DiagnosticKind::luq;
    spec.luq = {p, p > 1 ? LuqForm::outer_root : LuqForm::inner_sum};
    spec.target = {0.5, 0.5};
    spec.window = {0.0, 10.0};
    return spec;
}

} // namespace

TEST_CASE("grid node placement") {
    GridSpec grid{-1.0, 1.0, 0.0, 2.0, 5, 3, false};
    ScalarField2D f = grid.empty_field();
    CHECK(f.nx == 5);
    CHECK(f.ny == 3);
    CHECK(f.x_at(0) == -1.0);
    CHECK(f.x_at(4) == 1.0);
    CHECK(f.y_at(2) == 2.0);

    grid.cell_centered = true;
    f = grid.empty_field();
    CHECK(f.x_at(0) == doctest::Approx(-0.8));
    CHECK(f.x_at(4) == doctest::Approx(0.8));
    CHECK(f.y_at(1) == doctest::Approx(1.0));

    CHECK_THROWS_AS(validate(GridSpec{1.0, 1.0, 0.0, 1.0, 2, 2, false}), ArgumentError);
    CHECK_THROWS_AS(validate(GridSpec{0.0, 1.0, 0.0, 1.0, 0, 2, false}), ArgumentError);
}

TEST_CASE("diagnostic names") {
    for (const auto kind : {DiagnosticKind::luq, DiagnosticKind::luq_map, DiagnosticKind::blob_error,
                            DiagnosticKind::m_forward, DiagnosticKind::m_backward, DiagnosticKind::m_both,
                            DiagnosticKind::m_average, DiagnosticKind::displacement})
        CHECK(parse_diagnostic_name(diagnostic_name(kind)) == kind);
    CHECK(std::string(diagnostic_name(DiagnosticKind::m_both)) == "m_both");
    CHECK_THROWS_AS(parse_diagnostic_name("luqq"), ArgumentError);
}

TEST_CASE("dynamics and diagnostic must fit") {
    DiagnosticSpec spec = luq_spec();
    CHECK_THROWS_AS(validate(Dynamics{MapSpec{SaddleMap{2.0}}}, spec), ArgumentError);
    spec.kind = DiagnosticKind::luq_map;
    CHECK_THROWS_AS(validate(Dynamics{FlowSpec{LinearSaddle{1.0}}}, spec), ArgumentError);
    CHECK_NOTHROW(validate(Dynamics{MapSpec{SaddleMap{2.0}}}, spec));
    spec.iterations = 0;
    CHECK_THROWS_AS(validate(Dynamics{MapSpec{SaddleMap{2.0}}}, spec), ArgumentError);

    spec = luq_spec();
    spec.luq = {2.0, LuqForm::inner_sum};
    CHECK_THROWS_AS(validate(Dynamics{FlowSpec{LinearSaddle{1.0}}}, spec), ArgumentError);
    spec = luq_spec();
    spec.kind = DiagnosticKind::m_both;
    spec.tau = -1.0;
    CHECK_THROWS_AS(validate(Dynamics{FlowSpec{LinearSaddle{1.0}}}, spec), ArgumentError);
}

TEST_CASE("sweep over a 1 x 2 grid of a stationary field") {
    DiagnosticSpec spec = luq_spec();
    spec.target = {0.0, 0.0};
    const GridSpec grid{0.0, 0.0 + 1.0, 0.0, 2.0, 1, 2, false};
    const ScalarField2D f = sweep(grid, Dynamics{still_grid_flow()}, spec);
    REQUIRE(f.values.size() == 2);
    CHECK(f.x_at(0) == 0.0);
    CHECK(f.at(0, 0) == 0.0);
    CHECK(f.at(0, 1) == 2.0);
}

TEST_CASE("sweep is independent of the worker count") {
    const GridSpec grid{-1.5, 1.5, -1.0, 1.0, 23, 17, false};
    DiagnosticSpec spec = luq_spec();
    spec.kind = DiagnosticKind::m_both;
    spec.tau = 3.0;
    spec.h = 1e-2;
    const Dynamics dyn{FlowSpec{Duffing{0.1}}};
    const ScalarField2D one = sweep(grid, dyn, spec, 1);
    for (const unsigned workers : {2u, 3u, 8u, 64u})
        CHECK(same_bits(one, sweep(grid, dyn, spec, workers)));
}

TEST_CASE("sweep nodes equal direct evaluation") {
    const GridSpec grid{-1.0, 1.0, -1.0, 1.0, 9, 7, true};
    const Dynamics dyn{FlowSpec{RotatedSaddle{1.0}}};
    DiagnosticSpec spec = luq_spec(0.5);
    spec.h = 1e-2;
    const ScalarField2D f = sweep(grid, dyn, spec, 3);
    for (std::size_t j = 0; j < f.ny; ++j)
        for (std::size_t i = 0; i < f.nx; ++i)
            CHECK(f.at(i, j) == evaluate_node(dyn, spec, {f.x_at(i), f.y_at(j)}));
}

TEST_CASE("node failures become undefined cells") {
    const GridSpec grid{0.0, 1.0, 0.0, 1.0, 3, 3, false};
    const ScalarField2D f = sweep(grid, [](const State2& s) -> double {
        if (s.x > 0.75)
            throw DomainError(s.x, s.y, 0.0);
        return s.x + s.y;
    });
    CHECK(f.undefined_count() == 3);
    CHECK(is_undefined(f.at(2, 1)));
    CHECK(f.at(1, 1) == 1.0);
}

TEST_CASE("saddle luq field is minimal on the stable manifold") {
    const GridSpec grid{-1.0, 1.0, -1.0, 1.0, 201, 201, false};
    DiagnosticSpec spec = luq_spec();
    spec.h = 1e-2;
    const ScalarField2D f = sweep(grid, Dynamics{FlowSpec{LinearSaddle{1.0}}}, spec, 2);
    const RidgeResult ridge = extract_minimal_ridge(f, ScanAxis::rows, RidgeMode::min_locus);
    REQUIRE(ridge.features.size() == 201);
    for (const auto& feat : ridge.features)
        CHECK(feat.feature_index == 100);
}

TEST_CASE("ridge extraction examples") {
    const GridSpec grid{-1.0, 1.0, -1.0, 1.0, 21, 11, false};

    SUBCASE("absolute value has its minimum on x = 0") {
        const ScalarField2D f = field_from(grid, [](double x, double) { return std::abs(x); });
        const RidgeResult ridge = extract_minimal_ridge(f, ScanAxis::rows, RidgeMode::min_locus);
        REQUIRE(ridge.features.size() == 11);
        for (std::size_t j = 0; j < 11; ++j) {
            const auto on = ridge.on_line(j);
            REQUIRE(on.size() == 1);
            CHECK(on[0].feature_index == 10);
        }
        const RidgeResult kink = extract_minimal_ridge(f, ScanAxis::rows, RidgeMode::gradient_jump);
        REQUIRE(kink.features.size() == 11);
        for (const auto& feat : kink.features)
            CHECK(feat.feature_index == 10);
    }
    SUBCASE("constant field") {
        const ScalarField2D f = field_from(grid, [](double, double) { return 3.0; });
        const RidgeResult ridge = extract_minimal_ridge(f, ScanAxis::rows, RidgeMode::min_locus);
        REQUIRE(ridge.features.size() == 11);
        for (const auto& feat : ridge.features)
            CHECK(feat.feature_index == 0);
        CHECK(extract_minimal_ridge(f, ScanAxis::rows, RidgeMode::gradient_jump).features.empty());
        CHECK(extract_minimal_ridge(f, ScanAxis::columns, RidgeMode::min_locus).features.size() == 21);
    }
    SUBCASE("column scan") {
        const ScalarField2D f = field_from(grid, [](double x, double y) { return std::abs(y - 0.2) + x * x; });
        const RidgeResult ridge = extract_minimal_ridge(f, ScanAxis::columns, RidgeMode::min_locus);
        REQUIRE(ridge.features.size() == 21);
        for (const auto& feat : ridge.features)
            CHECK(f.y_at(feat.feature_index) == doctest::Approx(0.2));
    }
    SUBCASE("undefined cells split a line") {
        ScalarField2D f = field_from(grid, [](double x, double) { return std::abs(std::abs(x) - 0.5); });
        for (std::size_t j = 0; j < f.ny; ++j)
            f.at(10, j) = kUndefined;
        const RidgeResult kink = extract_minimal_ridge(f, ScanAxis::rows, RidgeMode::gradient_jump);
        for (std::size_t j = 0; j < f.ny; ++j) {
            const auto on = kink.on_line(j);
            REQUIRE(on.size() == 2);
            CHECK(on[0].feature_index == 5);
            CHECK(on[1].feature_index == 15);
        }
        const RidgeResult low = extract_minimal_ridge(f, ScanAxis::rows, RidgeMode::min_locus);
        for (const auto& feat : low.features)
            CHECK(feat.feature_index == 5);
    }
    SUBCASE("fully undefined line has no feature") {
        ScalarField2D f = field_from(grid, [](double x, double) { return x; });
        for (std::size_t i = 0; i < f.nx; ++i)
            f.at(i, 4) = kUndefined;
        const RidgeResult ridge = extract_minimal_ridge(f, ScanAxis::rows, RidgeMode::min_locus);
        CHECK(ridge.features.size() == 10);
        CHECK(ridge.on_line(4).empty());
    }
}

TEST_CASE("min_locus is invariant under increasing transforms") {
    const GridSpec grid{-1.0, 1.0, -1.0, 1.0, 31, 13, false};
    const ScalarField2D f = field_from(grid, [](double x, double y) { return std::sin(3 * x + y) + 0.3 * x * y + 2; });
    const RidgeResult base = extract_minimal_ridge(f, ScanAxis::rows, RidgeMode::min_locus);
    for (int variant = 0; variant < 3; ++variant) {
        ScalarField2D g = f;
        for (double& v : g.values)
            v = variant == 0 ? std::log(v) : variant == 1 ? v * v * v : 7 * v - 100;
        const RidgeResult other = extract_minimal_ridge(g, ScanAxis::rows, RidgeMode::min_locus);
        REQUIRE(other.features.size() == base.features.size());
        for (std::size_t k = 0; k < base.features.size(); ++k)
            CHECK(other.features[k].feature_index == base.features[k].feature_index);
    }
}

TEST_CASE("rotated saddle ridge follows y = -x") {
    const GridSpec grid{-1.0, 1.0, -1.0, 1.0, 201, 201, false};
    DiagnosticSpec spec = luq_spec();
    spec.h = 1e-2;
    const ScalarField2D f = sweep(grid, Dynamics{FlowSpec{RotatedSaddle{1.0}}}, spec, 2);
    const RidgeResult ridge = extract_minimal_ridge(f, ScanAxis::rows, RidgeMode::min_locus);
    REQUIRE(ridge.features.size() == 201);
    for (const auto& feat : ridge.features) {
        const double x = f.x_at(feat.feature_index), y = f.y_at(feat.line_index);
        CHECK(std::abs(x + y) <= 0.01 * 1.0000001);
    }
}

TEST_CASE("saddle map ridge is the x0 = 0 column") {
    const GridSpec grid{-1.0, 1.0, -1.0, 1.0, 201, 201, false};
    DiagnosticSpec spec = luq_spec();
    spec.kind = DiagnosticKind::luq_map;
    spec.iterations = 10;
    const ScalarField2D f = sweep(grid, Dynamics{MapSpec{SaddleMap{2.0}}}, spec, 2);
    const RidgeResult ridge = extract_minimal_ridge(f, ScanAxis::rows, RidgeMode::min_locus);
    REQUIRE(ridge.features.size() == 201);
    for (const auto& feat : ridge.features)
        CHECK(feat.feature_index == 100);
}

TEST_CASE("ridge csv") {
    const GridSpec grid{0.0, 2.0, 0.0, 1.0, 3, 2, false};
    const ScalarField2D f = field_from(grid, [](double x, double y) { return std::abs(x - 1) + y; });
    const RidgeResult ridge = extract_minimal_ridge(f, ScanAxis::rows, RidgeMode::min_locus);
    std::ostringstream out;
    write_ridge_csv(f, ridge, out);
    CHECK(out.str() == "line_index,feature_index,x,y,value\n0,1,1,0,0\n1,1,1,1,1\n");
}

TEST_CASE("sampled saddle grid reproduces the analytic field while trajectories stay inside") {
    GridAxes axes;
    axes.nx = axes.ny = 401;
    axes.x0 = axes.y0 = -1.2;
    axes.dx = axes.dy = 2.4 / 400.0;
    std::stringstream text;
    write_velocity_grid(sample_flow(LinearSaddle{1.0}, axes), text);
    const FlowSpec gridded = Gridded{std::make_shared<const GriddedField>(load_velocity_grid(text))};

    // x0 e^1 stays within 1.2 for |x0| <= 0.44.
    const GridSpec grid{-0.4, 0.4, -1.0, 1.0, 41, 41, false};
    DiagnosticSpec spec = luq_spec();
    spec.window = {0.0, 1.0};
    spec.h = 2e-3;
    const ScalarField2D analytic = sweep(grid, Dynamics{FlowSpec{LinearSaddle{1.0}}}, spec);
    const ScalarField2D sampled = sweep(grid, Dynamics{gridded}, spec);
    CHECK(sampled.undefined_count() == 0);
    for (std::size_t k = 0; k < analytic.values.size(); ++k)
        CHECK(sampled.values[k] == doctest::Approx(analytic.values[k]).epsilon(1e-10));

    const RidgeResult a = extract_minimal_ridge(analytic, ScanAxis::rows, RidgeMode::min_locus);
    const RidgeResult g = extract_minimal_ridge(sampled, ScanAxis::rows, RidgeMode::min_locus);
    REQUIRE(a.features.size() == g.features.size());
    for (std::size_t k = 0; k < a.features.size(); ++k)
        CHECK(a.features[k].feature_index == g.features[k].feature_index);
}

TEST_CASE("sampled saddle grid leaves the domain on long windows") {
    GridAxes axes;
    axes.nx = axes.ny = 41;
    axes.x0 = axes.y0 = -1.2;
    axes.dx = axes.dy = 0.06;
    const FlowSpec gridded = Gridded{std::make_shared<const GriddedField>(sample_flow(LinearSaddle{1.0}, axes))};
    DiagnosticSpec spec = luq_spec();
    spec.h = 1e-2;
    CHECK(is_undefined(evaluate_node(Dynamics{gridded}, spec, {0.1, 0.3})));
    CHECK_FALSE(is_undefined(evaluate_node(Dynamics{gridded}, spec, {0.0, 0.3})));
}
