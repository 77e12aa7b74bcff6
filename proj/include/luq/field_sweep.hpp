#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "luq/diagnostics.hpp"
#include "luq/flow_models.hpp"
#include "luq/gridded_data.hpp"

namespace luq {

/// Rectangular lattice of initial conditions.
///
/// Vertex-centred (default): nodes at x_min + i (x_max - x_min)/(nx - 1),
/// boundary included. Cell-centred: the rectangle is split into nx x ny cells
/// and nodes sit at the cell centres.
struct GridSpec {
    double x_min = -1.0, x_max = 1.0;
    double y_min = -1.0, y_max = 1.0;
    std::size_t nx = 2, ny = 2;
    bool cell_centered = false;

    /// Output geometry (origin and spacing) of a sweep over this grid.
    ScalarField2D empty_field() const;
};

void validate(const GridSpec& grid);

enum class DiagnosticKind { luq, luq_map, blob_error, m_forward, m_backward, m_both, m_average, displacement };

/// A named diagnostic together with every parameter it can use. Only the
/// fields relevant to `kind` are read.
struct DiagnosticSpec {
    DiagnosticKind kind = DiagnosticKind::luq;
    LuqParams luq;
    Target target;
    TimeWindow window{0.0, 10.0};   // luq, blob_error, displacement
    std::size_t iterations = 10;    // luq_map
    double t0 = 0.0, tau = 10.0;    // m_*
    double radius = 1e-3;           // blob_error
    std::size_t n_points = 64;      // blob_error
    double h = 0.0;                 // 0 selects default_step
};

using Dynamics = std::variant<FlowSpec, MapSpec>;

const char* diagnostic_name(DiagnosticKind kind);
/// Throws ArgumentError for an unknown name.
DiagnosticKind parse_diagnostic_name(const std::string& name);

/// Checks that the diagnostic's parameters and the dynamics kind fit together.
void validate(const Dynamics& dyn, const DiagnosticSpec& spec);

/// Evaluate one diagnostic at one initial condition. Errors from the
/// underlying evaluation (domain exits, poles, blow-up) become kUndefined.
double evaluate_node(const Dynamics& dyn, const DiagnosticSpec& spec, const State2& s0);

using NodeFunction = std::function<double(const State2&)>;

/// Evaluate fn at every node of grid. Nodes are split across `workers`
/// threads; each node writes only its own slot, so the result does not depend
/// on the worker count. Exceptions derived from luq::Error become kUndefined.
ScalarField2D sweep(const GridSpec& grid, const NodeFunction& fn, unsigned workers = 1);

/// Validates then sweeps the named diagnostic.
ScalarField2D sweep(const GridSpec& grid, const Dynamics& dyn, const DiagnosticSpec& spec, unsigned workers = 1);

enum class ScanAxis { rows, columns };
enum class RidgeMode { min_locus, gradient_jump };

struct RidgeFeature {
    std::size_t line_index = 0;    // row j when scanning rows, column i otherwise
    std::size_t feature_index = 0; // position along the scan line
    double value = 0.0;
};

struct RidgeResult {
    ScanAxis scan_axis = ScanAxis::rows;
    std::vector<RidgeFeature> features;

    /// Features belonging to one scan line.
    std::vector<RidgeFeature> on_line(std::size_t line) const;
};

/// Locate minimal ridges line by line.
///
/// min_locus: the defined cell with the smallest value on each line (lowest
/// index on ties). gradient_jump: cells whose central second difference along
/// the line exceeds threshold times the line median of |second difference|;
/// undefined cells split a line into segments that are scanned separately.
RidgeResult extract_minimal_ridge(const ScalarField2D& f, ScanAxis axis, RidgeMode mode, double threshold = 10.0);

/// Ridge CSV: `line_index,feature_index,x,y,value`.
void write_ridge_csv(const ScalarField2D& f, const RidgeResult& ridge, std::ostream& out);

} // namespace luq
