#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "luq/flow_models.hpp"
#include "luq/types.hpp"

namespace luq {

enum class LuqForm {
    outer_root, ///< (|dx|^p + |dy|^p)^(1/p), p > 1
    inner_sum,  ///< |dx|^p + |dy|^p, 0 < p <= 1
};

struct LuqParams {
    double p = 2.0;
    LuqForm form = LuqForm::outer_root;
};

/// Throws ArgumentError unless p matches the form's admissible range.
void validate(const LuqParams& prm);

struct BlobSpec {
    State2 center;
    double radius = 1e-3;
    std::size_t n_points = 64;
};

void validate(const BlobSpec& blob);

enum class DescriptorMode { forward, backward, both };

double luq_pointwise(const State2& x_final, const Target& tgt, const LuqParams& prm);

/// Integrates s0 over a forward window and measures the endpoint against tgt.
/// Returns kUndefined if the trajectory left the data domain.
double luq_trajectory(const FlowSpec& flow, const State2& s0, const TimeWindow& w, const Target& tgt,
                      const LuqParams& prm, double h);

/// L_UQ of the n-th map iterate (n >= 1).
double luq_map(const MapSpec& map, const State2& s0, std::size_t n, const Target& tgt, const LuqParams& prm);

State2 centroid(std::span<const State2> points);

/// Centre plus n_points samples spaced uniformly on the blob's boundary circle.
std::vector<State2> blob_samples(const BlobSpec& blob);

/// Distance between the centroid of the advected blob samples and the target centroid.
double blob_error(const FlowSpec& flow, const BlobSpec& blob, const TimeWindow& w, const Target& target_centroid,
                  double h);

/// Arc length over [t0, t0+tau] (forward), [t0-tau, t0] (backward), or both.
double m_descriptor(const FlowSpec& flow, const State2& s0, double t0, double tau, DescriptorMode mode, double h);

/// m_descriptor(both) / (2 tau).
double m_average(const FlowSpec& flow, const State2& s0, double t0, double tau, double h);

/// Euclidean displacement between initial and final positions.
double displacement_D(const State2& s0, const State2& s_final);

} // namespace luq
