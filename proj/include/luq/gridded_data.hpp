#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "luq/flow_models.hpp"
#include "luq/types.hpp"

namespace luq {

enum class Geometry { planar, spherical };

struct GridAxes {
    std::size_t nx = 2, ny = 2, nt = 1;
    double x0 = 0.0, dx = 1.0;
    double y0 = 0.0, dy = 1.0;
    double t0 = 0.0, dt = 1.0;
};

/// Time-dependent velocity samples on a regular lattice.
///
/// Values are stored row-major with time slowest, then y, then x. Under
/// spherical geometry u and v are in m/s and coordinates in degrees; the
/// field then yields angular rates in degrees per unit time. A single time
/// snapshot (nt == 1) is treated as a steady field.
class GriddedField {
  public:
    /// Validates dimensions, spacing and finiteness; throws DimensionError,
    /// ValueError or ArgumentError.
    GriddedField(GridAxes axes, Geometry geometry, double earth_radius, std::vector<double> u,
                 std::vector<double> v);

    const GridAxes& axes() const { return axes_; }
    Geometry geometry() const { return geometry_; }
    double earth_radius() const { return earth_radius_; }
    const std::vector<double>& u_values() const { return u_; }
    const std::vector<double>& v_values() const { return v_; }

    std::size_t index(std::size_t it, std::size_t iy, std::size_t ix) const {
        return (it * axes_.ny + iy) * axes_.nx + ix;
    }

    double x_max() const { return axes_.x0 + static_cast<double>(axes_.nx - 1) * axes_.dx; }
    double y_max() const { return axes_.y0 + static_cast<double>(axes_.ny - 1) * axes_.dy; }
    double t_max() const { return axes_.t0 + static_cast<double>(axes_.nt - 1) * axes_.dt; }

    bool contains(const State2& s, double t) const;

    /// Raw (u, v) interpolated inside one space cell at one snapshot, with
    /// local coordinates fx, fy in [0, 1]. No unit conversion.
    Velocity2 sample_cell(std::size_t it, std::size_t ix, std::size_t iy, double fx, double fy) const;

  private:
    GridAxes axes_;
    Geometry geometry_;
    double earth_radius_;
    std::vector<double> u_, v_;
};

/// Parse a VELGRID-1 stream.
GriddedField load_velocity_grid(std::istream& in);

/// Serialize to VELGRID-1 with 17 significant digits.
void write_velocity_grid(const GriddedField& g, std::ostream& out);

/// Sample an analytic planar flow at the nodes of a grid.
GriddedField sample_flow(const FlowSpec& flow, const GridAxes& axes);

/// Bilinear in space, linear in time. Throws DomainError outside the data.
Velocity2 interp_velocity(const GriddedField& g, const State2& s, double t);
std::optional<Velocity2> try_interp_velocity(const GriddedField& g, const State2& s, double t);

/// Diagnostic values on a regular grid of initial conditions. Cells that
/// could not be evaluated hold kUndefined.
struct ScalarField2D {
    std::size_t nx = 1, ny = 1;
    double x0 = 0.0, dx = 1.0;
    double y0 = 0.0, dy = 1.0;
    std::vector<double> values;

    double x_at(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
    double y_at(std::size_t j) const { return y0 + static_cast<double>(j) * dy; }
    double at(std::size_t i, std::size_t j) const { return values[j * nx + i]; }
    double& at(std::size_t i, std::size_t j) { return values[j * nx + i]; }

    std::size_t undefined_count() const;
};

/// FIELD-CSV: header `x,y,value`, rows y-outer/x-inner, empty value for undefined cells.
void export_scalar_field(const ScalarField2D& f, std::ostream& out);

/// Read a FIELD-CSV stream back; grid geometry is recovered from the coordinates.
ScalarField2D load_scalar_field(std::istream& in);

} // namespace luq
