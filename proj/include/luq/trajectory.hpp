#pragma once

#include <cstddef>
#include <vector>

#include "luq/flow_models.hpp"
#include "luq/types.hpp"

namespace luq {

struct Trajectory {
    std::vector<double> times;
    std::vector<State2> states;
    double arc_length = 0.0;
    // Set when the path left the velocity data; states end at the last
    // in-domain sample and arc_length covers only that part.
    bool truncated = false;

    const State2& final_state() const { return states.back(); }
};

enum class Recording { full_path, endpoints };

/// Fixed-step classical RK4 from w.t_start to w.t_end.
///
/// The last step is shortened so the path lands exactly on t_end. Arc length
/// is integrated alongside the state as the extra component d(arc)/dt = |v|,
/// so it sees the same four stage velocities as the state update. With
/// Recording::endpoints only the initial and final samples are kept.
///
/// Throws ArgumentError for h <= 0, h > |window| or an empty window, and
/// IntegrationError if the state becomes non-finite.
Trajectory integrate(const FlowSpec& flow, const State2& s0, const TimeWindow& w, double h,
                     Recording rec = Recording::full_path);

/// Step used when a config leaves h unspecified: |window| / 5000.
double default_step(const TimeWindow& w);

/// Orbit s0, F(s0), ..., F^n(s0) with times 0..n; arc length is the polyline length.
Trajectory iterate_map(const MapSpec& map, const State2& s0, std::size_t n);

} // namespace luq
