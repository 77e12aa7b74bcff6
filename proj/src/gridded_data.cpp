#include "luq/gridded_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "luq/errors.hpp"

namespace luq {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep = ',') {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::optional<double> to_double(std::string_view tok) {
    double value = 0.0;
    const auto* end = tok.data() + tok.size();
    const auto [ptr, ec] = std::from_chars(tok.data(), end, value);
    if (tok.empty() || ec != std::errc{} || ptr != end)
        return std::nullopt;
    return value;
}

double header_double(std::string_view tok, std::size_t line, const char* what) {
    const auto value = to_double(tok);
    if (!value || !std::isfinite(*value))
        throw ParseError(line, std::string("invalid ") + what + " '" + std::string(tok) + "'");
    return *value;
}

std::size_t header_size(std::string_view tok, std::size_t line, const char* what) {
    std::size_t value = 0;
    const auto* end = tok.data() + tok.size();
    const auto [ptr, ec] = std::from_chars(tok.data(), end, value);
    if (tok.empty() || ec != std::errc{} || ptr != end)
        throw ParseError(line, std::string("invalid ") + what + " '" + std::string(tok) + "'");
    return value;
}

std::vector<std::string_view> expect_record(const std::string& line, std::size_t line_no, std::string_view key,
                                            std::size_t n_fields) {
    auto fields = split(line);
    if (fields.front() != key)
        throw ParseError(line_no, "expected '" + std::string(key) + "' record, got '" + line + "'");
    if (fields.size() != n_fields)
        throw ParseError(line_no, "'" + std::string(key) + "' record needs " + std::to_string(n_fields - 1) +
                                      " values");
    return fields;
}

std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

GriddedField::GriddedField(GridAxes axes, Geometry geometry, double earth_radius, std::vector<double> u,
                           std::vector<double> v)
    : axes_(axes), geometry_(geometry), earth_radius_(earth_radius), u_(std::move(u)), v_(std::move(v)) {
    if (axes_.nx < 2 || axes_.ny < 2 || axes_.nt < 1)
        throw DimensionError("velocity grid needs nx, ny >= 2 and nt >= 1");
    if (!(axes_.dx > 0.0) || !(axes_.dy > 0.0) || !(axes_.dt > 0.0))
        throw ArgumentError("velocity grid spacing must be positive");
    if (geometry_ == Geometry::spherical && !(earth_radius_ > 0.0))
        throw ArgumentError("earth_radius must be positive");
    const std::size_t n = axes_.nx * axes_.ny * axes_.nt;
    if (u_.size() != n || v_.size() != n)
        throw DimensionError("velocity arrays hold " + std::to_string(u_.size()) + "/" + std::to_string(v_.size()) +
                             " values, dims require " + std::to_string(n));
    for (std::size_t it = 0; it < axes_.nt; ++it)
        for (std::size_t iy = 0; iy < axes_.ny; ++iy)
            for (std::size_t ix = 0; ix < axes_.nx; ++ix) {
                const std::size_t k = index(it, iy, ix);
                if (!std::isfinite(u_[k]) || !std::isfinite(v_[k]))
                    throw ValueError(it, iy, ix, "non-finite velocity");
            }
}

bool GriddedField::contains(const State2& s, double t) const {
    const bool in_space = s.x >= axes_.x0 && s.x <= x_max() && s.y >= axes_.y0 && s.y <= y_max();
    const bool in_time = axes_.nt == 1 ? std::isfinite(t) : (t >= axes_.t0 && t <= t_max());
    return in_space && in_time;
}

Velocity2 GriddedField::sample_cell(std::size_t it, std::size_t ix, std::size_t iy, double fx, double fy) const {
    const std::size_t k00 = index(it, iy, ix);
    const std::size_t k10 = k00 + 1;
    const std::size_t k01 = k00 + axes_.nx;
    const std::size_t k11 = k01 + 1;
    const double w00 = (1.0 - fx) * (1.0 - fy);
    const double w10 = fx * (1.0 - fy);
    const double w01 = (1.0 - fx) * fy;
    const double w11 = fx * fy;
    return {w00 * u_[k00] + w10 * u_[k10] + w01 * u_[k01] + w11 * u_[k11],
            w00 * v_[k00] + w10 * v_[k10] + w01 * v_[k01] + w11 * v_[k11]};
}

std::optional<Velocity2> try_interp_velocity(const GriddedField& g, const State2& s, double t) {
    if (!g.contains(s, t))
        return std::nullopt;
    const GridAxes& a = g.axes();

    const double gx = (s.x - a.x0) / a.dx;
    const double gy = (s.y - a.y0) / a.dy;
    const auto ix = std::min(static_cast<std::size_t>(gx), a.nx - 2);
    const auto iy = std::min(static_cast<std::size_t>(gy), a.ny - 2);
    const double fx = gx - static_cast<double>(ix);
    const double fy = gy - static_cast<double>(iy);

    Velocity2 uv;
    if (a.nt == 1) {
        uv = g.sample_cell(0, ix, iy, fx, fy);
    } else {
        const double gt = (t - a.t0) / a.dt;
        const auto it = std::min(static_cast<std::size_t>(gt), a.nt - 2);
        const double ft = gt - static_cast<double>(it);
        const Velocity2 lo = g.sample_cell(it, ix, iy, fx, fy);
        const Velocity2 hi = g.sample_cell(it + 1, ix, iy, fx, fy);
        uv = {(1.0 - ft) * lo.dx_dt + ft * hi.dx_dt, (1.0 - ft) * lo.dy_dt + ft * hi.dy_dt};
    }

    if (g.geometry() == Geometry::spherical) {
        if (!(std::abs(s.y) < 90.0))
            return std::nullopt;
        return spherical_rates_deg(uv.dx_dt, uv.dy_dt, s.y, g.earth_radius());
    }
    return uv;
}

Velocity2 interp_velocity(const GriddedField& g, const State2& s, double t) {
    if (auto v = try_interp_velocity(g, s, t))
        return *v;
    throw DomainError(s.x, s.y, t);
}

GriddedField load_velocity_grid(std::istream& in) {
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);)
        lines.push_back(std::move(line));
    if (lines.size() < 5)
        throw ParseError(lines.size() + 1, "truncated VELGRID-1 header");

    if (lines[0] != "velgrid,1")
        throw ParseError(1, "expected 'velgrid,1'");

    GridAxes axes;
    auto f = expect_record(lines[1], 2, "dims", 4);
    axes.nx = header_size(f[1], 2, "nx");
    axes.ny = header_size(f[2], 2, "ny");
    axes.nt = header_size(f[3], 2, "nt");
    if (axes.nx < 2 || axes.ny < 2 || axes.nt < 1)
        throw ParseError(2, "dims need nx >= 2, ny >= 2, nt >= 1");

    f = expect_record(lines[2], 3, "origin", 4);
    axes.x0 = header_double(f[1], 3, "x0");
    axes.y0 = header_double(f[2], 3, "y0");
    axes.t0 = header_double(f[3], 3, "t0");

    f = expect_record(lines[3], 4, "spacing", 4);
    axes.dx = header_double(f[1], 4, "dx");
    axes.dy = header_double(f[2], 4, "dy");
    axes.dt = header_double(f[3], 4, "dt");
    if (!(axes.dx > 0.0) || !(axes.dy > 0.0) || !(axes.dt > 0.0))
        throw ParseError(4, "spacing must be positive");

    Geometry geometry = Geometry::planar;
    double earth_radius = 0.0;
    f = split(lines[4]);
    if (f.front() != "geometry")
        throw ParseError(5, "expected 'geometry' record");
    if (f.size() == 2 && f[1] == "planar") {
        geometry = Geometry::planar;
    } else if (f.size() == 3 && f[1] == "spherical") {
        geometry = Geometry::spherical;
        earth_radius = header_double(f[2], 5, "earth_radius");
        if (!(earth_radius > 0.0))
            throw ParseError(5, "earth_radius must be positive");
    } else {
        throw ParseError(5, "geometry must be 'planar' or 'spherical,<earth_radius>'");
    }

    const std::size_t plane = axes.nx * axes.ny;
    const std::size_t block_lines = 1 + 2 * axes.ny;
    const std::size_t payload_lines = lines.size() - 5;
    if (payload_lines != axes.nt * block_lines)
        throw DimensionError("dims " + std::to_string(axes.nx) + "x" + std::to_string(axes.ny) + "x" +
                             std::to_string(axes.nt) + " require " + std::to_string(axes.nt * block_lines) +
                             " payload lines, found " + std::to_string(payload_lines));

    std::vector<double> u(plane * axes.nt), v(plane * axes.nt);
    std::size_t ln = 5;
    for (std::size_t it = 0; it < axes.nt; ++it) {
        const auto tf = split(lines[ln]);
        if (tf.front() != "time")
            throw DimensionError("line " + std::to_string(ln + 1) + ": expected 'time," + std::to_string(it) +
                                 "'; row count does not match ny");
        if (tf.size() != 2 || header_size(tf[1], ln + 1, "time index") != it)
            throw ParseError(ln + 1, "expected 'time," + std::to_string(it) + "'");
        ++ln;
        for (int component = 0; component < 2; ++component) {
            std::vector<double>& dest = component == 0 ? u : v;
            for (std::size_t iy = 0; iy < axes.ny; ++iy, ++ln) {
                const auto row = split(lines[ln]);
                if (row.size() != axes.nx)
                    throw DimensionError("line " + std::to_string(ln + 1) + ": expected " + std::to_string(axes.nx) +
                                         " values, found " + std::to_string(row.size()));
                for (std::size_t ix = 0; ix < axes.nx; ++ix) {
                    const auto value = to_double(row[ix]);
                    if (!value)
                        throw ParseError(ln + 1, "invalid number '" + std::string(row[ix]) + "'");
                    if (!std::isfinite(*value))
                        throw ValueError(it, iy, ix,
                                         std::string(component == 0 ? "non-finite u" : "non-finite v") + " on line " +
                                             std::to_string(ln + 1));
                    dest[it * plane + iy * axes.nx + ix] = *value;
                }
            }
        }
    }
    return GriddedField(axes, geometry, earth_radius, std::move(u), std::move(v));
}

void write_velocity_grid(const GriddedField& g, std::ostream& out) {
    const GridAxes& a = g.axes();
    out << "velgrid,1\n";
    out << "dims," << a.nx << ',' << a.ny << ',' << a.nt << '\n';
    out << "origin," << g17(a.x0) << ',' << g17(a.y0) << ',' << g17(a.t0) << '\n';
    out << "spacing," << g17(a.dx) << ',' << g17(a.dy) << ',' << g17(a.dt) << '\n';
    if (g.geometry() == Geometry::planar)
        out << "geometry,planar\n";
    else
        out << "geometry,spherical," << g17(g.earth_radius()) << '\n';
    for (std::size_t it = 0; it < a.nt; ++it) {
        out << "time," << it << '\n';
        for (const auto* values : {&g.u_values(), &g.v_values()})
            for (std::size_t iy = 0; iy < a.ny; ++iy) {
                for (std::size_t ix = 0; ix < a.nx; ++ix) {
                    if (ix)
                        out << ',';
                    out << g17((*values)[g.index(it, iy, ix)]);
                }
                out << '\n';
            }
    }
}

GriddedField sample_flow(const FlowSpec& flow, const GridAxes& axes) {
    const std::size_t n = axes.nx * axes.ny * axes.nt;
    std::vector<double> u(n), v(n);
    std::size_t k = 0;
    for (std::size_t it = 0; it < axes.nt; ++it) {
        const double t = axes.t0 + static_cast<double>(it) * axes.dt;
        for (std::size_t iy = 0; iy < axes.ny; ++iy)
            for (std::size_t ix = 0; ix < axes.nx; ++ix, ++k) {
                const State2 s{axes.x0 + static_cast<double>(ix) * axes.dx,
                               axes.y0 + static_cast<double>(iy) * axes.dy};
                const Velocity2 vel = eval_velocity(flow, s, t);
                u[k] = vel.dx_dt;
                v[k] = vel.dy_dt;
            }
    }
    return GriddedField(axes, Geometry::planar, 0.0, std::move(u), std::move(v));
}

std::size_t ScalarField2D::undefined_count() const {
    return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), is_undefined));
}

void export_scalar_field(const ScalarField2D& f, std::ostream& out) {
    out << "x,y,value\n";
    for (std::size_t j = 0; j < f.ny; ++j) {
        const std::string y = g17(f.y_at(j));
        for (std::size_t i = 0; i < f.nx; ++i) {
            out << g17(f.x_at(i)) << ',' << y << ',';
            if (const double value = f.at(i, j); !is_undefined(value))
                out << g17(value);
            out << '\n';
        }
    }
    if (!out)
        throw Error("failed writing FIELD-CSV output");
}

ScalarField2D load_scalar_field(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "x,y,value")
        throw ParseError(1, "expected FIELD-CSV header 'x,y,value'");

    std::vector<double> xs, ys, values;
    std::size_t ln = 1;
    while (std::getline(in, line)) {
        ++ln;
        const auto f = split(line);
        if (f.size() != 3)
            throw ParseError(ln, "expected 3 columns");
        const auto x = to_double(f[0]);
        const auto y = to_double(f[1]);
        if (!x || !y)
            throw ParseError(ln, "invalid coordinate");
        double value = kUndefined;
        if (!f[2].empty()) {
            const auto parsed = to_double(f[2]);
            if (!parsed)
                throw ParseError(ln, "invalid value '" + std::string(f[2]) + "'");
            value = *parsed;
        }
        xs.push_back(*x);
        ys.push_back(*y);
        values.push_back(value);
    }
    if (values.empty())
        throw DimensionError("FIELD-CSV has no rows");

    std::size_t nx = 1;
    while (nx < ys.size() && ys[nx] == ys[0])
        ++nx;
    if (values.size() % nx != 0)
        throw DimensionError("FIELD-CSV row count " + std::to_string(values.size()) +
                             " is not a multiple of the row length " + std::to_string(nx));
    const std::size_t ny = values.size() / nx;
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i)
            if (ys[j * nx + i] != ys[j * nx] || xs[j * nx + i] != xs[i])
                throw ParseError(j * nx + i + 2, "rows are not on a regular y-outer/x-inner grid");

    ScalarField2D field;
    field.nx = nx;
    field.ny = ny;
    field.x0 = xs[0];
    field.y0 = ys[0];
    field.dx = nx > 1 ? (xs[nx - 1] - xs[0]) / static_cast<double>(nx - 1) : 1.0;
    field.dy = ny > 1 ? (ys[(ny - 1) * nx] - ys[0]) / static_cast<double>(ny - 1) : 1.0;
    field.values = std::move(values);
    return field;
}

} // namespace luq
