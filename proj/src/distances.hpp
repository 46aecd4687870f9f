#pragma once

#include "measure.hpp"
#include "radius_law.hpp"

namespace sphstat {

// sup_{s >= 0} |est(s) - G(s)|, exact for step estimates against the
// supported laws (evaluated at jump points from both sides).
double ks_distance(const StepCdf& est, const RadiusLaw& law);

// Integral of (est - G)^2 over the law's mass-carrying interval, normalized
// by its length. Exact piecewise integration.
double cvm_distance(const StepCdf& est, const RadiusLaw& law);

}  // namespace sphstat
