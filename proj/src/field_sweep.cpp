#include "luq/field_sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>
#include <thread>

#include "luq/errors.hpp"
#include "luq/trajectory.hpp"

namespace luq {

namespace {

struct NameEntry {
    DiagnosticKind kind;
    const char* name;
};

constexpr NameEntry kNames[] = {
    {DiagnosticKind::luq, "luq"},
    {DiagnosticKind::luq_map, "luq_map"},
    {DiagnosticKind::blob_error, "blob_error"},
    {DiagnosticKind::m_forward, "m_forward"},
    {DiagnosticKind::m_backward, "m_backward"},
    {DiagnosticKind::m_both, "m_both"},
    {DiagnosticKind::m_average, "m_average"},
    {DiagnosticKind::displacement, "displacement"},
};

bool uses_window(DiagnosticKind k) {
    return k == DiagnosticKind::luq || k == DiagnosticKind::blob_error || k == DiagnosticKind::displacement;
}

bool is_descriptor(DiagnosticKind k) {
    return k == DiagnosticKind::m_forward || k == DiagnosticKind::m_backward || k == DiagnosticKind::m_both ||
           k == DiagnosticKind::m_average;
}

double resolved_step(const DiagnosticSpec& spec) {
    if (spec.h > 0.0)
        return spec.h;
    if (is_descriptor(spec.kind))
        return default_step({spec.t0, spec.t0 + spec.tau});
    return default_step(spec.window);
}

double evaluate_flow_node(const FlowSpec& flow, const DiagnosticSpec& spec, const State2& s0) {
    const double h = resolved_step(spec);
    switch (spec.kind) {
    case DiagnosticKind::luq:
        return luq_trajectory(flow, s0, spec.window, spec.target, spec.luq, h);
    case DiagnosticKind::blob_error:
        return blob_error(flow, {s0, spec.radius, spec.n_points}, spec.window, spec.target, h);
    case DiagnosticKind::m_forward:
        return m_descriptor(flow, s0, spec.t0, spec.tau, DescriptorMode::forward, h);
    case DiagnosticKind::m_backward:
        return m_descriptor(flow, s0, spec.t0, spec.tau, DescriptorMode::backward, h);
    case DiagnosticKind::m_both:
        return m_descriptor(flow, s0, spec.t0, spec.tau, DescriptorMode::both, h);
    case DiagnosticKind::m_average:
        return m_average(flow, s0, spec.t0, spec.tau, h);
    case DiagnosticKind::displacement: {
        const Trajectory traj = integrate(flow, s0, spec.window, h, Recording::endpoints);
        return traj.truncated ? kUndefined : displacement_D(s0, traj.final_state());
    }
    case DiagnosticKind::luq_map:
        break;
    }
    throw ArgumentError(std::string(diagnostic_name(spec.kind)) + " cannot be evaluated on a continuous flow");
}

double median(std::vector<double> v) {
    if (v.empty())
        return 0.0;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1)
        return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

ScalarField2D GridSpec::empty_field() const {
    ScalarField2D f;
    f.nx = nx;
    f.ny = ny;
    if (cell_centered) {
        f.dx = (x_max - x_min) / static_cast<double>(nx);
        f.dy = (y_max - y_min) / static_cast<double>(ny);
        f.x0 = x_min + 0.5 * f.dx;
        f.y0 = y_min + 0.5 * f.dy;
    } else {
        f.dx = nx > 1 ? (x_max - x_min) / static_cast<double>(nx - 1) : x_max - x_min;
        f.dy = ny > 1 ? (y_max - y_min) / static_cast<double>(ny - 1) : y_max - y_min;
        f.x0 = x_min;
        f.y0 = y_min;
    }
    f.values.assign(nx * ny, kUndefined);
    return f;
}

void validate(const GridSpec& grid) {
    if (!std::isfinite(grid.x_min) || !std::isfinite(grid.x_max) || !std::isfinite(grid.y_min) ||
        !std::isfinite(grid.y_max))
        throw ArgumentError("grid bounds must be finite");
    if (!(grid.x_min < grid.x_max) || !(grid.y_min < grid.y_max))
        throw ArgumentError("grid bounds need x_min < x_max and y_min < y_max");
    if (grid.nx < 1 || grid.ny < 1)
        throw ArgumentError("grid needs at least one node per axis");
}

const char* diagnostic_name(DiagnosticKind kind) {
    for (const auto& e : kNames)
        if (e.kind == kind)
            return e.name;
    return "?";
}

DiagnosticKind parse_diagnostic_name(const std::string& name) {
    for (const auto& e : kNames)
        if (name == e.name)
            return e.kind;
    throw ArgumentError("unknown diagnostic '" + name + "'");
}

void validate(const Dynamics& dyn, const DiagnosticSpec& spec) {
    const bool is_map = std::holds_alternative<MapSpec>(dyn);
    if (spec.kind == DiagnosticKind::luq_map && !is_map)
        throw ArgumentError("luq_map needs a discrete map");
    if (spec.kind != DiagnosticKind::luq_map && is_map)
        throw ArgumentError(std::string(diagnostic_name(spec.kind)) + " needs a continuous flow");
    if (is_map)
        validate(std::get<MapSpec>(dyn));
    else
        validate(std::get<FlowSpec>(dyn));

    if (spec.kind == DiagnosticKind::luq || spec.kind == DiagnosticKind::luq_map)
        validate(spec.luq);
    if (spec.kind == DiagnosticKind::luq || spec.kind == DiagnosticKind::luq_map ||
        spec.kind == DiagnosticKind::blob_error) {
        if (!std::isfinite(spec.target.x_star) || !std::isfinite(spec.target.y_star))
            throw ArgumentError("target must be finite");
    }
    if (spec.kind == DiagnosticKind::luq_map && spec.iterations < 1)
        throw ArgumentError("luq_map needs iterations >= 1");
    if (uses_window(spec.kind)) {
        if (!std::isfinite(spec.window.t_start) || !std::isfinite(spec.window.t_end) || !spec.window.forward())
            throw ArgumentError("window must be finite with t_end > t_start");
    }
    if (is_descriptor(spec.kind) && (!(spec.tau > 0.0) || !std::isfinite(spec.t0)))
        throw ArgumentError("descriptor needs tau > 0 and finite t0");
    if (spec.kind == DiagnosticKind::blob_error)
        validate(BlobSpec{{0.0, 0.0}, spec.radius, spec.n_points});
    if (spec.kind != DiagnosticKind::luq_map) {
        if (spec.h < 0.0 || !std::isfinite(spec.h))
            throw ArgumentError("step h must be positive");
        const double span = is_descriptor(spec.kind) ? spec.tau : spec.window.length();
        if (resolved_step(spec) > span)
            throw ArgumentError("step h exceeds the integration window");
    }
}

double evaluate_node(const Dynamics& dyn, const DiagnosticSpec& spec, const State2& s0) {
    try {
        if (const auto* map = std::get_if<MapSpec>(&dyn))
            return luq_map(*map, s0, spec.iterations, spec.target, spec.luq);
        return evaluate_flow_node(std::get<FlowSpec>(dyn), spec, s0);
    } catch (const Error&) {
        return kUndefined;
    }
}

ScalarField2D sweep(const GridSpec& grid, const NodeFunction& fn, unsigned workers) {
    validate(grid);
    ScalarField2D field = grid.empty_field();
    const std::size_t n_nodes = field.values.size();
    const unsigned n_workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n_nodes)));

    std::vector<std::exception_ptr> failures(n_workers);
    auto run = [&](unsigned w) {
        try {
            for (std::size_t k = w; k < n_nodes; k += n_workers) {
                const State2 s0{field.x_at(k % field.nx), field.y_at(k / field.nx)};
                try {
                    field.values[k] = fn(s0);
                } catch (const Error&) {
                    field.values[k] = kUndefined;
                }
            }
        } catch (...) {
            failures[w] = std::current_exception();
        }
    };

    if (n_workers == 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_workers);
        for (unsigned w = 0; w < n_workers; ++w)
            pool.emplace_back(run, w);
    }
    for (const auto& failure : failures)
        if (failure)
            std::rethrow_exception(failure);
    return field;
}

ScalarField2D sweep(const GridSpec& grid, const Dynamics& dyn, const DiagnosticSpec& spec, unsigned workers) {
    validate(dyn, spec);
    return sweep(grid, [&](const State2& s0) { return evaluate_node(dyn, spec, s0); }, workers);
}

std::vector<RidgeFeature> RidgeResult::on_line(std::size_t line) const {
    std::vector<RidgeFeature> out;
    for (const auto& f : features)
        if (f.line_index == line)
            out.push_back(f);
    return out;
}

RidgeResult extract_minimal_ridge(const ScalarField2D& f, ScanAxis axis, RidgeMode mode, double threshold) {
    const bool rows = axis == ScanAxis::rows;
    const std::size_t n_lines = rows ? f.ny : f.nx;
    const std::size_t len = rows ? f.nx : f.ny;
    auto value = [&](std::size_t line, std::size_t idx) { return rows ? f.at(idx, line) : f.at(line, idx); };

    RidgeResult result;
    result.scan_axis = axis;
    std::vector<double> line_values(len);
    for (std::size_t line = 0; line < n_lines; ++line) {
        for (std::size_t idx = 0; idx < len; ++idx)
            line_values[idx] = value(line, idx);

        if (mode == RidgeMode::min_locus) {
            std::optional<std::size_t> best;
            for (std::size_t idx = 0; idx < len; ++idx) {
                if (is_undefined(line_values[idx]))
                    continue;
                if (!best || line_values[idx] < line_values[*best])
                    best = idx;
            }
            if (best)
                result.features.push_back({line, *best, line_values[*best]});
            continue;
        }

        // Second differences never straddle an undefined cell.
        std::vector<std::pair<std::size_t, double>> d2;
        for (std::size_t idx = 1; idx + 1 < len; ++idx) {
            const double l = line_values[idx - 1], c = line_values[idx], r = line_values[idx + 1];
            if (is_undefined(l) || is_undefined(c) || is_undefined(r))
                continue;
            d2.emplace_back(idx, l - 2.0 * c + r);
        }
        std::vector<double> magnitudes;
        magnitudes.reserve(d2.size());
        for (const auto& [idx, d] : d2)
            magnitudes.push_back(std::abs(d));
        const double cutoff = threshold * median(std::move(magnitudes));
        for (const auto& [idx, d] : d2)
            if (d > cutoff)
                result.features.push_back({line, idx, line_values[idx]});
    }
    return result;
}

void write_ridge_csv(const ScalarField2D& f, const RidgeResult& ridge, std::ostream& out) {
    out << "line_index,feature_index,x,y,value\n";
    const bool rows = ridge.scan_axis == ScanAxis::rows;
    for (const auto& feat : ridge.features) {
        const std::size_t i = rows ? feat.feature_index : feat.line_index;
        const std::size_t j = rows ? feat.line_index : feat.feature_index;
        out << feat.line_index << ',' << feat.feature_index << ',' << g17(f.x_at(i)) << ',' << g17(f.y_at(j)) << ','
            << g17(feat.value) << '\n';
    }
    if (!out)
        throw Error("failed writing ridge CSV output");
}

} // namespace luq
