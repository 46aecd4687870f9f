#pragma once

#include <cstdint>
#include <vector>

#include "boolean_model.hpp"
#include "intervals.hpp"
#include "measure.hpp"

namespace sphstat {

struct GrainArcs {
  std::int64_t germ = -1;
  double radius = 0.0;
  AngleSet visible;  // boundary directions not covered by any other grain
};

struct ArcDecomposition {
  std::vector<GrainArcs> grains;  // grains whose boundary circle meets the region
};

// Visibility decomposition of grain boundary circles, for grains whose circle
// intersects `region`. Coverage is tested against every grain in the sample.
ArcDecomposition visible_arcs(const Realization& r, const Window& region);

// Angles theta with c + rho*(cos, sin)(theta) inside the box (closed sides;
// side grazing is a null event for the arc measures).
AngleSet angles_inside_box(const double* c, double rho, const Window& W);

// Vanishing-bandwidth limit of the spherical-gauge estimator: each grain
// contributes its visible in-window boundary length l_i weighted l_i/(2 pi r_i),
// a zero-radius exposed grain counting as a unit atom at 0.
WeightedRadiusMeasure estimate_limit_spherical(const Realization& r, const ArcDecomposition& arcs,
                                               const Window& W);

// Directional limit: weights l_i(u)/r_i with l_i(u) the projection of the
// visible, in-window, front-facing boundary onto the axis orthogonal to u.
// Zero-radius grains cannot be weighted and are dropped (flag reported).
WeightedRadiusMeasure estimate_limit_linear(const Realization& r, const ArcDecomposition& arcs,
                                            const Window& W, const double* u,
                                            bool* dropped_zero_radius = nullptr);

// Average of the four normalized axis-direction estimates.
StepCdf estimate_limit_linear_combined(const Realization& r, const ArcDecomposition& arcs,
                                       const Window& W);

}  // namespace sphstat
