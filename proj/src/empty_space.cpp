#include "empty_space.hpp"

#include <algorithm>
#include <cmath>

#include "common.hpp"
#include "quadrature.hpp"

namespace sphstat {

WeightFunction WeightFunction::band(double eps) {
  WeightFunction f;
  f.kind = Kind::IndicatorBand;
  f.eps = eps;
  f.validate();
  return f;
}

WeightFunction WeightFunction::tabulated(std::vector<std::pair<double, double>> knots) {
  WeightFunction f;
  f.kind = Kind::Tabulated;
  f.knots = std::move(knots);
  f.validate();
  return f;
}

void WeightFunction::validate() const {
  if (kind == Kind::IndicatorBand) {
    if (!(eps > 0) || !std::isfinite(eps))
      throw Error(Errc::invalid_argument, "band weight needs finite eps > 0");
    return;
  }
  if (knots.size() < 2) throw Error(Errc::invalid_argument, "tabulated weight needs >= 2 knots");
  double mass = 0.0;
  for (size_t i = 0; i < knots.size(); ++i) {
    if (!(knots[i].first >= 0) || !std::isfinite(knots[i].first) ||
        !(knots[i].second >= 0) || !std::isfinite(knots[i].second))
      throw Error(Errc::invalid_argument, "tabulated weight needs finite nonnegative knots");
    if (i > 0) {
      if (!(knots[i].first > knots[i - 1].first))
        throw Error(Errc::invalid_argument, "tabulated weight knots must be strictly increasing");
      mass += 0.5 * (knots[i].second + knots[i - 1].second) *
              (knots[i].first - knots[i - 1].first);
    }
  }
  if (knots.front().first == 0.0 && knots.front().second != 0.0)
    throw Error(Errc::invalid_argument, "weight function must vanish at 0");
  if (!(mass > 0)) throw Error(Errc::invalid_argument, "weight function carries no mass");
}

double WeightFunction::operator()(double t) const {
  if (kind == Kind::IndicatorBand) return (t > 0.0 && t <= eps) ? 1.0 / eps : 0.0;
  if (!(t >= knots.front().first) || t > knots.back().first) return 0.0;
  auto it = std::upper_bound(knots.begin(), knots.end(), std::make_pair(t, kInf));
  if (it == knots.begin()) return 0.0;
  size_t i = size_t(it - knots.begin());
  if (i == knots.size()) return knots.back().second;
  double t0 = knots[i - 1].first, t1 = knots[i].first;
  double v0 = knots[i - 1].second, v1 = knots[i].second;
  return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
}

double WeightFunction::support_hi() const {
  return kind == Kind::IndicatorBand ? eps : knots.back().first;
}

double WeightFunction::integral() const {
  if (kind == Kind::IndicatorBand) return 1.0;
  double mass = 0.0;
  for (size_t i = 1; i < knots.size(); ++i)
    mass += 0.5 * (knots[i].second + knots[i - 1].second) * (knots[i].first - knots[i - 1].first);
  return mass;
}

double empty_space_exponent(double t, const ModelParams& p, const GaugeBody& B) {
  if (t < 0) throw Error(Errc::invalid_argument, "contact distances are nonnegative");
  if (B.dim != p.dim) throw Error(Errc::invalid_argument, "gauge dimension mismatch");
  std::vector<double> vols = intrinsic_volumes(B);
  double sum = 0.0;
  double tpow = 1.0;
  for (int j = 0; j <= B.dim; ++j) {
    sum += kappa_volume(B.dim - j) * vols[size_t(j)] * tpow * p.radii.moment(B.dim - j);
    tpow *= t;
  }
  return sum;
}

double empty_space_Fbar(double t, const ModelParams& p, const GaugeBody& B) {
  return std::exp(-p.gamma * empty_space_exponent(t, p, B));
}

double empty_space_F(double t, const ModelParams& p, const GaugeBody& B) {
  return -std::expm1(-p.gamma * empty_space_exponent(t, p, B));
}

double decay_constant(const ModelParams& p, const GaugeBody& B) {
  std::vector<double> vols = intrinsic_volumes(B);
  return 0.25 * p.gamma * kappa_volume(B.dim - 1) * vols[1] * p.radii.moment(B.dim - 1);
}

double fbar_horizon(const ModelParams& p, const GaugeBody& B, double floor) {
  double target = -std::log(floor) / p.gamma;  // exponent where Fbar = floor
  double lo = 0.0, hi = 1.0;
  while (empty_space_exponent(hi, p, B) < target) {
    hi *= 2.0;
    if (hi > 1e12) return hi;  // degenerate gauge with no growth in t
  }
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (empty_space_exponent(mid, p, B) < target)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

double beta_constant(const WeightFunction& f, const ModelParams& p, const GaugeBody& B) {
  f.validate();
  double horizon = fbar_horizon(p, B);
  auto integrand = [&](double t) { return f(t) * empty_space_Fbar(t, p, B); };
  double beta = 0.0;
  if (f.kind == WeightFunction::Kind::IndicatorBand) {
    double hi = std::min(f.eps, horizon);
    beta = adaptive_simpson(integrand, 0.0, hi, 1e-9);
  } else {
    // integrate each linear piece separately so the kinks stay on endpoints
    for (size_t i = 1; i < f.knots.size(); ++i) {
      double a = f.knots[i - 1].first, b = f.knots[i].first;
      if (a >= horizon) break;
      beta += adaptive_simpson(integrand, a, std::min(b, horizon), 1e-9);
    }
  }
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw Error(Errc::validation_failed,
                "weight function has zero effective mass against the vacancy survival");
  return beta;
}

namespace {

// kappa_d E (t + R)^d via binomial moments
double mean_grown_ball_volume(double t, const ModelParams& p) {
  int d = p.dim;
  double binom = 1.0, sum = 0.0;
  for (int k = 0; k <= d; ++k) {
    sum += binom * std::pow(t, d - k) * p.radii.moment(k);
    binom = binom * double(d - k) / double(k + 1);
  }
  return kappa_volume(d) * sum;
}

}  // namespace

double mean_lens_volume(double dist, double t1, double t2, const ModelParams& p) {
  if (dist < 0 || t1 < 0 || t2 < 0)
    throw Error(Errc::invalid_argument, "mean_lens_volume: negative argument");
  int d = p.dim;
  double cap_hi = std::min(mean_grown_ball_volume(t1, p), mean_grown_ball_volume(t2, p));
  double tmin = std::min(t1, t2);
  double value = 0.0;
  if (dist <= std::abs(t1 - t2)) {
    // B(0, tmin + r) stays inside the other grown ball for every r
    value = mean_grown_ball_volume(tmin, p);
  } else if (p.radii.kind == RadiusKind::Deterministic) {
    value = lens_volume(d, dist, t1 + p.radii.r0, t2 + p.radii.r0);
  } else {
    // lens vanishes for r <= r_star, smooth beyond; one Gauss panel suffices
    double r_star = 0.5 * (dist - t1 - t2);
    double lo, hi, scale;
    if (p.radii.kind == RadiusKind::Uniform) {
      lo = p.radii.a;
      hi = p.radii.b;
      scale = 1.0 / (p.radii.b - p.radii.a);
    } else {
      lo = 0.0;
      hi = p.radii.cap(1e-14);
      scale = 1.0;
    }
    lo = std::max(lo, r_star);
    if (hi > lo) {
      auto g = [&](double r) {
        double dens = p.radii.kind == RadiusKind::Uniform
                          ? scale
                          : p.radii.rate * std::exp(-p.radii.rate * r);
        return lens_volume(d, dist, t1 + r, t2 + r) * dens;
      };
      value = gauss_integrate(g, lo, hi, 64);
    }
  }
  return std::clamp(value, 0.0, cap_hi);
}

double second_order_Fbar2(double dist, double t1, double t2, const ModelParams& p) {
  double f1 = empty_space_Fbar(t1, p, GaugeBody::ball(p.dim));
  double f2 = empty_space_Fbar(t2, p, GaugeBody::ball(p.dim));
  return f1 * f2 * std::exp(p.gamma * mean_lens_volume(dist, t1, t2, p));
}

double second_order_Fbar2_vec(const double* u, double t1, double t2, const ModelParams& p,
                              const GaugeBody& B) {
  if (B.kind != GaugeKind::UnitBall)
    throw Error(Errc::unsupported, "two-point vacancy survival requires the unit-ball gauge");
  double d2 = 0.0;
  for (int i = 0; i < p.dim; ++i) d2 += u[i] * u[i];
  return second_order_Fbar2(std::sqrt(d2), t1, t2, p);
}

}  // namespace sphstat
