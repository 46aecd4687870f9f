#include "distances.hpp"

#include <algorithm>
#include <cmath>

#include "common.hpp"

namespace sphstat {

namespace {

double law_atom(const RadiusLaw& law, double x) {
  return law.kind == RadiusKind::Deterministic && x == law.r0 ? 1.0 : 0.0;
}

// int_a^b (c - G(s))^2 ds on an interval where the estimate is the constant c
// and G has no breakpoint strictly inside.
double seg_sq_integral(double a, double b, double c, const RadiusLaw& law) {
  if (!(b > a)) return 0.0;
  switch (law.kind) {
    case RadiusKind::Uniform: {
      // G linear: G(s) = alpha s + beta on [a, b]
      double alpha, beta;
      if (b <= law.a) {
        alpha = 0;
        beta = 0;
      } else if (a >= law.b) {
        alpha = 0;
        beta = 1;
      } else {
        alpha = 1.0 / (law.b - law.a);
        beta = -law.a * alpha;
      }
      // (c - beta - alpha s)^2 integrated exactly
      double u0 = c - beta - alpha * a;
      double u1 = c - beta - alpha * b;
      if (alpha == 0.0) return u0 * u0 * (b - a);
      return (u0 * u0 * u0 - u1 * u1 * u1) / (3.0 * alpha);
    }
    case RadiusKind::Exponential: {
      // G(s) = 1 - exp(-rate s); (c - 1 + e^{-rate s})^2
      double A = c - 1.0, r = law.rate;
      double e_a = std::exp(-r * a), e_b = std::exp(-r * b);
      double t1 = A * A * (b - a);
      double t2 = 2.0 * A * (e_a - e_b) / r;
      double t3 = (e_a * e_a - e_b * e_b) / (2.0 * r);
      return t1 + t2 + t3;
    }
    case RadiusKind::Deterministic: {
      double g = b <= law.r0 ? 0.0 : 1.0;  // constant on pieces split at r0
      double u = c - g;
      return u * u * (b - a);
    }
  }
  return 0.0;
}

}  // namespace

double ks_distance(const StepCdf& est, const RadiusLaw& law) {
  if (!est.valid()) throw Error(Errc::invalid_argument, "ks_distance: null estimate");
  std::vector<double> pts = est.s;
  for (double b : law.cdf_breakpoints()) pts.push_back(b);
  pts.push_back(0.0);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double sup = 0.0;
  for (double x : pts) {
    if (x < 0) continue;
    double g_right = law.cdf(x);
    double g_left = g_right - law_atom(law, x);
    sup = std::max(sup, std::abs(est.at(x) - g_right));
    sup = std::max(sup, std::abs(est.left_at(x) - g_left));
  }
  return sup;
}

double cvm_distance(const StepCdf& est, const RadiusLaw& law) {
  if (!est.valid()) throw Error(Errc::invalid_argument, "cvm_distance: null estimate");
  double lo, hi;
  law.cvm_support(&lo, &hi);
  if (!(hi > lo)) throw Error(Errc::invalid_argument, "degenerate law support");
  std::vector<double> pts;
  pts.push_back(lo);
  pts.push_back(hi);
  for (double x : est.s)
    if (x > lo && x < hi) pts.push_back(x);
  for (double x : law.cdf_breakpoints())
    if (x > lo && x < hi) pts.push_back(x);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double a = pts[i], b = pts[i + 1];
    acc += seg_sq_integral(a, b, est.at(a), law);
  }
  return acc / (hi - lo);
}

}  // namespace sphstat
