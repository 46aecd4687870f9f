#include "gauge.hpp"

#include <algorithm>
#include <cmath>

#include "common.hpp"

namespace sphstat {

GaugeBody GaugeBody::ball(int dim) {
  if (dim < 1) throw Error(Errc::invalid_argument, "gauge dimension must be >= 1");
  GaugeBody b;
  b.kind = GaugeKind::UnitBall;
  b.dim = dim;
  return b;
}

GaugeBody GaugeBody::segment(int dim, const double* direction) {
  if (dim < 1 || dim > 3)
    throw Error(Errc::invalid_argument, "segment gauge supports dimensions 1..3");
  double n2 = 0;
  for (int i = 0; i < dim; ++i) n2 += direction[i] * direction[i];
  if (std::abs(n2 - 1.0) > 1e-9)
    throw Error(Errc::invalid_argument, "segment direction must be a unit vector");
  GaugeBody b;
  b.kind = GaugeKind::Segment;
  b.dim = dim;
  for (int i = 0; i < 3; ++i) b.dir[i] = i < dim ? direction[i] : 0.0;
  return b;
}

GaugeBody GaugeBody::segment2(double dx, double dy) {
  double d[2] = {dx, dy};
  return segment(2, d);
}

double kappa_volume(int k) {
  if (k < 0) throw Error(Errc::invalid_argument, "kappa_volume: negative dimension");
  return std::pow(kPi, 0.5 * k) / std::tgamma(1.0 + 0.5 * k);
}

std::vector<double> intrinsic_volumes(const GaugeBody& B) {
  std::vector<double> v(size_t(B.dim) + 1, 0.0);
  if (B.kind == GaugeKind::UnitBall) {
    // V_j(B^d) = binom(d, j) kappa_d / kappa_{d-j}
    double binom = 1.0;
    double kd = kappa_volume(B.dim);
    for (int j = 0; j <= B.dim; ++j) {
      v[size_t(j)] = binom * kd / kappa_volume(B.dim - j);
      binom = binom * double(B.dim - j) / double(j + 1);
    }
  } else {
    v[0] = 1.0;
    if (B.dim >= 1) v[1] = 1.0;
  }
  return v;
}

std::vector<double> h_density_coeffs(const GaugeBody& B) {
  std::vector<double> vols = intrinsic_volumes(B);
  std::vector<double> c(size_t(B.dim), 0.0);
  for (int j = 0; j < B.dim; ++j)
    c[size_t(j)] = double(j + 1) * kappa_volume(B.dim - 1 - j) * vols[size_t(j + 1)];
  return c;
}

double h_density(double t, double r, const GaugeBody& B) {
  std::vector<double> c = h_density_coeffs(B);
  double sum = 0.0;
  for (int j = B.dim - 1; j >= 0; --j) {
    double term = c[size_t(j)];
    for (int p = 0; p < j; ++p) term *= t;
    for (int p = 0; p < B.dim - 1 - j; ++p) term *= r;
    sum += term;
  }
  return sum;
}

double ray_ball_first_hit(const double* x, const double* dir, int dim,
                          const double* center, double radius) {
  double q = 0.0;  // |x-center|^2 - radius^2
  double b = 0.0;  // (center-x).dir
  for (int i = 0; i < dim; ++i) {
    double w = center[i] - x[i];
    q += w * w;
    b += w * dir[i];
  }
  q -= radius * radius;
  if (q <= 0.0) return 0.0;  // already inside the closed ball
  double disc = b * b - q;
  if (disc < 0.0 || b <= 0.0) return kInf;
  // smaller root, in the cancellation-free form q / (b + sqrt(disc))
  return q / (b + std::sqrt(disc));
}

double gauge_distance_to_ball(const double* x, const double* center, double radius,
                              const GaugeBody& B) {
  if (radius < 0) throw Error(Errc::invalid_argument, "negative ball radius");
  if (B.kind == GaugeKind::UnitBall) {
    double d2 = 0.0;
    for (int i = 0; i < B.dim; ++i) {
      double w = x[i] - center[i];
      d2 += w * w;
    }
    double d = std::sqrt(d2) - radius;
    return d > 0.0 ? d : 0.0;
  }
  return ray_ball_first_hit(x, B.dir, B.dim, center, radius);
}

namespace {

double clamp_unit(double v) { return std::min(1.0, std::max(-1.0, v)); }

double lens_area_2d(double d, double r1, double r2) {
  double a1 = r1 * r1 * std::acos(clamp_unit((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1)));
  double a2 = r2 * r2 * std::acos(clamp_unit((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2)));
  double t = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
  return a1 + a2 - 0.5 * std::sqrt(std::max(t, 0.0));
}

double lens_volume_3d(double d, double r1, double r2) {
  double s = r1 + r2 - d;
  return kPi * s * s * (d * d + 2.0 * d * (r1 + r2) - 3.0 * (r1 - r2) * (r1 - r2)) /
         (12.0 * d);
}

}  // namespace

double lens_volume(int dim, double dist, double rho1, double rho2) {
  if (dim != 2 && dim != 3)
    throw Error(Errc::unsupported, "lens_volume supports dimensions 2 and 3");
  if (dist < 0) throw Error(Errc::invalid_argument, "lens_volume: negative distance");
  double rmin = std::min(rho1, rho2);
  if (rmin <= 0.0) return 0.0;
  if (dist >= rho1 + rho2) return 0.0;
  double full = kappa_volume(dim) * std::pow(rmin, dim);
  if (dist <= std::abs(rho1 - rho2)) return full;
  double v = dim == 2 ? lens_area_2d(dist, rho1, rho2) : lens_volume_3d(dist, rho1, rho2);
  return std::min(std::max(v, 0.0), full);
}

double lens_volume(const LensSpec& spec) {
  double d2 = 0.0;
  for (int i = 0; i < std::min(spec.dim, 3); ++i) d2 += spec.u[i] * spec.u[i];
  return lens_volume(spec.dim, std::sqrt(d2), spec.rho1, spec.rho2);
}

double circle_fraction_outside(double dist, double rho, double R) {
  if (rho < 0 || R < 0 || dist < 0)
    throw Error(Errc::invalid_argument, "circle_fraction_outside: negative argument");
  if (rho == 0.0) return dist > R ? 1.0 : 0.0;
  if (dist >= rho + R) return 1.0;
  if (dist + rho <= R) return 0.0;
  if (dist + R <= rho) return 1.0;
  double q = (dist * dist + rho * rho - R * R) / (2.0 * dist * rho);
  return 1.0 - std::acos(clamp_unit(q)) / kPi;
}

}  // namespace sphstat
