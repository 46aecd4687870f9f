#pragma once

#include <vector>

namespace sphstat {

enum class GaugeKind { UnitBall, Segment };

// Structuring element for contact distances: either the closed unit ball, or
// the unit-length segment {s*dir : 0 <= s <= 1} with |dir| = 1.
struct GaugeBody {
  GaugeKind kind = GaugeKind::UnitBall;
  int dim = 2;
  double dir[3] = {1.0, 0.0, 0.0};  // Segment only

  static GaugeBody ball(int dim);
  static GaugeBody segment(int dim, const double* direction);
  static GaugeBody segment2(double dx, double dy);
};

// Volume of the k-dimensional unit ball.
double kappa_volume(int k);

// Intrinsic volumes V_0..V_dim of the gauge body.
std::vector<double> intrinsic_volumes(const GaugeBody& B);

// Contact density h(t, r) = sum_{j=0}^{d-1} (j+1) kappa_{d-1-j} V_{j+1}(B) r^{d-1-j} t^j.
// h_density_coeffs returns the c_j with h(t,r) = sum_j c_j r^{d-1-j} t^j.
std::vector<double> h_density_coeffs(const GaugeBody& B);
double h_density(double t, double r, const GaugeBody& B);

// Smallest t >= 0 such that x + t*B meets the closed ball B(center, radius).
// +inf when no dilation ever reaches it (Segment pointing away).
double gauge_distance_to_ball(const double* x, const double* center, double radius,
                              const GaugeBody& B);

// First nonnegative parameter s with x + s*dir in the closed ball, +inf on miss.
// dir must be unit length. Tangency counts as a hit.
double ray_ball_first_hit(const double* x, const double* dir, int dim,
                          const double* center, double radius);

// Intersection of B(0, rho1) with B(u, rho2).
struct LensSpec {
  int dim = 2;
  double u[3] = {0, 0, 0};
  double rho1 = 0, rho2 = 0;
};
double lens_volume(const LensSpec& spec);
double lens_volume(int dim, double dist, double rho1, double rho2);

// Fraction of the circle bd B(o, rho) lying outside the closed disk B(c, R),
// where dist = |c|. Planar only.
double circle_fraction_outside(double dist, double rho, double R);

}  // namespace sphstat
