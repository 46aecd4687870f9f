#pragma once

#include "boolean_model.hpp"
#include "empty_space.hpp"
#include "measure.hpp"

namespace sphstat {

enum class Method { Weighted, WeightedMinus, Uncorrected, Hanisch };

Method parse_method(const std::string& name);
std::string method_name(Method m);

struct EstimatorConfig {
  Method method = Method::Weighted;
  GaugeBody gauge = GaugeBody::ball(2);
  WeightFunction f = WeightFunction::band(1.0);
  double grid_h = 1.0 / 300.0;
  double minus_eps = 0.0;  // erosion depth for WeightedMinus
};

// Sampling margin the realization must provide for this configuration.
double required_margin(const EstimatorConfig& cfg, const ModelParams& params);

// Discretized weighted contact measure sum_{x in W cap L_h} f(d(x)) / h(d(x), R(x)) h^d
// over the global lattice L_h = {((k-1/2)h, (l-1/2)h)}.
WeightedRadiusMeasure eta_measure(const Realization& r, const GridIndex& idx, const Window& W,
                                  const GaugeBody& gauge, const WeightFunction& f,
                                  double grid_h);

// Grid evaluation of the configured estimator's contact measure on W.
WeightedRadiusMeasure estimate_edge_corrected(const Realization& r, const GridIndex& idx,
                                              const Window& W, const EstimatorConfig& cfg);

// Euclidean distance from x (inside W) to the nearest point of
// B(center, radius) intersected with W; +inf when the intersection is empty.
double clipped_ball_distance(const double* x, const double* center, double radius,
                             const Window& W);

bool ball_meets_box(const double* center, double radius, const Window& W);

// Index range of the global lattice L_h restricted to a box, row-major.
struct LatticeRange {
  long k0, k1, l0, l1;
  double h;
};
LatticeRange lattice_over(const Window& W, double h);

// Planar contact density h(t, r) = c0 r + c1 t, coefficients fixed per gauge.
struct HDensity {
  double c0 = 0, c1 = 0;
  explicit HDensity(const GaugeBody& B) {
    std::vector<double> c = h_density_coeffs(B);
    c0 = c[0];
    c1 = c.size() > 1 ? c[1] : 0.0;
  }
  double operator()(double t, double r) const { return c0 * r + c1 * t; }
};

}  // namespace sphstat
