#pragma once

#include <utility>
#include <vector>

#include "boolean_model.hpp"

namespace sphstat {

// Weight function f applied to contact distances. Must vanish at 0 and at
// infinity and have positive, finite mass against the empty-space survival
// function.
struct WeightFunction {
  enum class Kind { IndicatorBand, Tabulated };
  Kind kind = Kind::IndicatorBand;
  double eps = 1.0;                                // band: value 1/eps on (0, eps]
  std::vector<std::pair<double, double>> knots;    // tabulated: piecewise linear

  static WeightFunction band(double eps);
  static WeightFunction tabulated(std::vector<std::pair<double, double>> knots);

  double operator()(double t) const;
  double support_hi() const;
  double integral() const;  // int_0^inf f(t) dt
  void validate() const;
};

// Distribution function of the gauge contact distance from a fixed point to
// the vacant phase boundary: F(t) = P(distance <= t).
double empty_space_F(double t, const ModelParams& p, const GaugeBody& B);
double empty_space_Fbar(double t, const ModelParams& p, const GaugeBody& B);

// Exponent m(t) with Fbar(t) = exp(-gamma * m(t)).
double empty_space_exponent(double t, const ModelParams& p, const GaugeBody& B);

// Decay constant c with Fbar(t) <= exp(-4 c t).
double decay_constant(const ModelParams& p, const GaugeBody& B);

// beta = int_0^inf f(t) Fbar(t) dt. Errors when the mass is zero.
double beta_constant(const WeightFunction& f, const ModelParams& p, const GaugeBody& B);

// t beyond which Fbar(t) < floor (monotone bisection).
double fbar_horizon(const ModelParams& p, const GaugeBody& B, double floor = 1e-16);

// E |B(0, t1+R) ∩ B(dist*u, t2+R)| under the radius law. Exact for bounded
// polynomial cases, Gauss quadrature otherwise. Clamped to its analytic
// bounds [0, min_i kappa_d E(t_i+R)^d].
double mean_lens_volume(double dist, double t1, double t2, const ModelParams& p);

// Two-point vacancy survival Fbar2(u; t1, t2) for the unit-ball gauge;
// depends on u only through |u|.
double second_order_Fbar2(double dist, double t1, double t2, const ModelParams& p);
double second_order_Fbar2_vec(const double* u, double t1, double t2, const ModelParams& p,
                              const GaugeBody& B);

}  // namespace sphstat
