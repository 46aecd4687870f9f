#include "variance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "common.hpp"
#include "estimators.hpp"
#include "halton.hpp"
#include "rng.hpp"

namespace sphstat {

namespace {

struct ShiftSums {
  // index: 0 = C, 1 = complement, 2 = all radii, 3 = centered weights
  double i1[4] = {0, 0, 0, 0};
  double i2[4] = {0, 0, 0, 0};
};

struct QmcRun {
  std::vector<ShiftSums> shifts;
  double beta = 0.0;
  double g_mass = 0.0;
};

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / double(v.size());
}

double se_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean_of(v);
  double s2 = 0.0;
  for (double x : v) s2 += (x - m) * (x - m);
  return std::sqrt(s2 / double(v.size() - 1) / double(v.size()));
}

// Checked two-point survival; f1, f2 are the one-point survivals at t1, t2.
double checked_fbar2(double rho, double t1, double t2, double f1, double f2,
                     const ModelParams& p, bool check) {
  double v = second_order_Fbar2(rho, t1, t2, p);
  if (check) {
    double lo = f1 * f2;
    double hi = std::sqrt(lo);
    if (v < lo * (1.0 - 1e-9) || v > hi * (1.0 + 1e-9)) {
      char buf[256];
      std::snprintf(buf, sizeof buf,
                    "two-point survival out of bounds: rho=%.17g t1=%.17g t2=%.17g "
                    "value=%.17g lower=%.17g upper=%.17g",
                    rho, t1, t2, v, lo, hi);
      throw Error(Errc::numeric_failure, buf);
    }
  }
  return v;
}

QmcRun run_qmc(const RadiusSet& C, const ModelParams& p, const WeightFunction& f,
               const QmcOptions& opt, bool force_survival_one, bool skip_i2) {
  p.validate();
  f.validate();
  if (p.dim != 2)
    throw Error(Errc::unsupported, "asymptotic variance integrals are planar only");
  if (opt.points_per_shift < 16 || opt.shifts < 2)
    throw Error(Errc::invalid_argument, "need >= 16 points and >= 2 shifts");

  const GaugeBody ball = GaugeBody::ball(2);
  const double s_hi = f.support_hi();
  const double r_hi = radius_cap(p.radii);
  const double rho_max = 2.0 * (s_hi + r_hi);
  const double g_mass = C.law_mass(p.radii);

  QmcRun out;
  out.beta = beta_constant(f, p, ball);
  out.g_mass = g_mass;
  out.shifts.resize(std::size_t(opt.shifts));

  for (int sh = 0; sh < opt.shifts; ++sh) {
    Rng rng(splitmix64(opt.seed + std::uint64_t(sh)));
    double sv1[4], sv2[5];
    for (double& s : sv1) s = rng.u01();
    for (double& s : sv2) s = rng.u01();
    ShiftSums acc;

    for (std::uint64_t i = 1; i <= std::uint64_t(opt.points_per_shift); ++i) {
      // first-order integral: dims (rho, r, s, theta)
      {
        double rho = rho_max * halton_shifted(i, 0, sv1[0]);
        double r = p.radii.quantile(halton_shifted(i, 1, sv1[1]));
        double s = s_hi * halton_shifted(i, 2, sv1[2]);
        double th = kTau * halton_shifted(i, 3, sv1[3]);
        double fs = f(s);
        if (fs > 0.0) {
          double sr = s + r;
          double ux = rho + sr * std::cos(th), uy = sr * std::sin(th);
          double t = std::sqrt(ux * ux + uy * uy) - r;
          if (t > 0.0) {
            double ft = f(t);
            if (ft > 0.0) {
              double F2 = 1.0;
              if (!force_survival_one) {
                double f1 = empty_space_Fbar(s, p, ball);
                double f2 = empty_space_Fbar(t, p, ball);
                F2 = checked_fbar2(rho, s, t, f1, f2, p, opt.check_bounds);
              }
              double est = rho_max * s_hi * rho * fs * ft * F2 / (t + r);
              bool in = C.contains(r);
              double cen = (in ? 1.0 : 0.0) - g_mass;
              acc.i1[0] += in ? est : 0.0;
              acc.i1[1] += in ? 0.0 : est;
              acc.i1[2] += est;
              acc.i1[3] += cen * cen * est;
            }
          }
        }
      }
      // second-order integral: dims (rho, r1, r2, s1, s2)
      if (!skip_i2) {
        double rho = rho_max * halton_shifted(i, 0, sv2[0]);
        double r1 = p.radii.quantile(halton_shifted(i, 1, sv2[1]));
        double r2 = p.radii.quantile(halton_shifted(i, 2, sv2[2]));
        double s1 = s_hi * halton_shifted(i, 3, sv2[3]);
        double s2 = s_hi * halton_shifted(i, 4, sv2[4]);
        double f1v = f(s1), f2v = f(s2);
        if (f1v > 0.0 && f2v > 0.0) {
          double fb1 = empty_space_Fbar(s1, p, ball);
          double fb2 = empty_space_Fbar(s2, p, ball);
          double F2 = checked_fbar2(rho, s1, s2, fb1, fb2, p, opt.check_bounds);
          // boundary fractions of each grain-centered sphere against the
          // other contact body translated by +-u
          double out2 = circle_fraction_outside(rho, s2 + r2, s1 + r2);
          double out1 = circle_fraction_outside(rho, s1 + r1, s2 + r1);
          double scale = rho_max * s_hi * s_hi * kTau * rho * f1v * f2v;
          double core = out1 * out2 * F2 - fb1 * fb2;
          double core_tilde = (1.0 - out1) * (1.0 - out2) * F2;
          bool in1 = C.contains(r1), in2 = C.contains(r2);
          double c1 = (in1 ? 1.0 : 0.0) - g_mass;
          double c2 = (in2 ? 1.0 : 0.0) - g_mass;
          acc.i2[0] += in1 && in2 ? scale * core : 0.0;
          acc.i2[1] += !in1 && !in2 ? scale * core : 0.0;
          acc.i2[2] += scale * core;
          acc.i2[3] += c1 * c2 * scale * core_tilde;
        }
      }
    }
    double inv_n = 1.0 / double(opt.points_per_shift);
    for (int k = 0; k < 4; ++k) {
      acc.i1[k] *= inv_n;
      acc.i2[k] *= inv_n;
    }
    out.shifts[std::size_t(sh)] = acc;
  }
  return out;
}

}  // namespace

VarianceResult sigma2(const RadiusSet& C, const ModelParams& p, const WeightFunction& f,
                      const QmcOptions& opt) {
  QmcRun run = run_qmc(C, p, f, opt, false, false);
  std::vector<double> vals, t1s, t2s;
  for (const ShiftSums& s : run.shifts) {
    double a = p.gamma * s.i1[0];
    double b = p.gamma * p.gamma * s.i2[0];
    t1s.push_back(a);
    t2s.push_back(b);
    vals.push_back(a + b);
  }
  VarianceResult res;
  res.value = mean_of(vals);
  res.se = se_of(vals);
  res.tau1 = mean_of(t1s);
  res.tau2 = mean_of(t2s);
  return res;
}

SigmaG2Result sigma_G2(const RadiusSet& C, const ModelParams& p, const WeightFunction& f,
                       const QmcOptions& opt) {
  QmcRun run = run_qmc(C, p, f, opt, false, false);
  double g = run.g_mass;
  double denom = p.gamma * run.beta;
  denom *= denom;
  std::vector<double> combo, tilde;
  for (const ShiftSums& s : run.shifts) {
    double sC = p.gamma * s.i1[0] + p.gamma * p.gamma * s.i2[0];
    double sCc = p.gamma * s.i1[1] + p.gamma * p.gamma * s.i2[1];
    double sAll = p.gamma * s.i1[2] + p.gamma * p.gamma * s.i2[2];
    combo.push_back(((1.0 - g) * sC + g * sCc - g * (1.0 - g) * sAll) / denom);
    tilde.push_back((p.gamma * s.i1[3] + p.gamma * p.gamma * s.i2[3]) / denom);
  }
  SigmaG2Result res;
  res.value = mean_of(combo);
  res.se = se_of(combo);
  res.alt_value = mean_of(tilde);
  res.alt_se = se_of(tilde);
  res.beta = run.beta;
  res.g_mass = g;
  return res;
}

double tau1_integral_survival_one(const RadiusSet& C, const ModelParams& p,
                                  const WeightFunction& f, const QmcOptions& opt,
                                  double* se_out) {
  QmcRun run = run_qmc(C, p, f, opt, true, true);
  std::vector<double> vals;
  for (const ShiftSums& s : run.shifts) vals.push_back(s.i1[0]);
  if (se_out) *se_out = se_of(vals);
  return mean_of(vals);
}

std::vector<VarianceCurvePoint> empirical_variance_curve(const RadiusSet& C,
                                                         const ModelParams& p,
                                                         const WeightFunction& f,
                                                         double grid_h,
                                                         const std::vector<double>& n_list,
                                                         int reps, std::uint64_t seed) {
  if (reps < 2) throw Error(Errc::invalid_argument, "variance curve needs >= 2 replications");
  const GaugeBody ball = GaugeBody::ball(2);
  double margin = auto_margin(p, f.support_hi());
  std::vector<VarianceCurvePoint> out;
  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    Window W = Window::cube(2, n_list[ni]);
    std::vector<double> masses;
    for (int rep = 0; rep < reps; ++rep) {
      std::uint64_t s = Rng::derive(seed, (std::uint64_t(ni) << 32) | std::uint64_t(rep));
      Realization r = sample_realization(p, W, margin, s);
      GridIndex idx;
      idx.build(r, 0.0);
      WeightedRadiusMeasure m = eta_measure(r, idx, W, ball, f, grid_h);
      masses.push_back(m.mass(C));
    }
    double mean = mean_of(masses);
    double var = 0.0;
    for (double x : masses) var += (x - mean) * (x - mean);
    var /= double(masses.size() - 1);
    VarianceCurvePoint pt;
    pt.n = n_list[ni];
    pt.window_volume = W.volume();
    pt.mean_mass = mean;
    pt.normalized_variance = var / pt.window_volume;
    pt.reps = reps;
    out.push_back(pt);
  }
  return out;
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double kolmogorov_tail(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 1.0) {
    // theta-function form, fast for small arguments
    double sum = 0.0;
    for (int k = 1; k <= 64; ++k) {
      double e = double(2 * k - 1);
      sum += std::exp(-e * e * kPi * kPi / (8.0 * x * x));
    }
    return 1.0 - std::sqrt(kTau) / x * sum;
  }
  double sum = 0.0;
  for (int k = 1; k <= 256; ++k) {
    double term = 2.0 * std::exp(-2.0 * double(k) * double(k) * x * x);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-14) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

CltReport clt_campaign(const RadiusSet& C, const ModelParams& p, const WeightFunction& f,
                       double n, int reps, double grid_h, std::uint64_t seed,
                       const QmcOptions& qopt) {
  if (reps < 8) throw Error(Errc::invalid_argument, "campaign needs >= 8 replications");
  CltReport rep;
  SigmaG2Result sg = sigma_G2(C, p, f, qopt);
  if (!(sg.value > 0))
    throw Error(Errc::numeric_failure, "asymptotic variance estimate is not positive");
  rep.sigma_g2 = sg.value;
  rep.g_target = sg.g_mass;

  const GaugeBody ball = GaugeBody::ball(2);
  Window W = Window::cube(2, n);
  rep.window_volume = W.volume();
  double margin = auto_margin(p, f.support_hi());
  std::vector<double> devs;  // sqrt(|W|) (Ghat - g)
  for (int i = 0; i < reps; ++i) {
    Realization r = sample_realization(p, W, margin, Rng::derive(seed, std::uint64_t(i)));
    GridIndex idx;
    idx.build(r, 0.0);
    WeightedRadiusMeasure m = eta_measure(r, idx, W, ball, f, grid_h);
    double ratio = estimate_ratio(m, C);
    if (std::isnan(ratio)) {
      ++rep.aborted;
      continue;
    }
    devs.push_back(std::sqrt(rep.window_volume) * (ratio - rep.g_target));
  }
  rep.reps = reps;
  double sd = std::sqrt(sg.value);
  for (double d : devs) rep.stats.push_back(d / sd);
  std::sort(rep.stats.begin(), rep.stats.end());
  std::size_t m = rep.stats.size();
  if (m >= 8) {
    double D = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double F = standard_normal_cdf(rep.stats[i]);
      D = std::max(D, std::abs(F - double(i) / double(m)));
      D = std::max(D, std::abs(double(i + 1) / double(m) - F));
    }
    rep.ks_stat = D;
    rep.ks_p = kolmogorov_tail(std::sqrt(double(m)) * D);
    double mean = mean_of(devs);
    double var = 0.0;
    for (double d : devs) var += (d - mean) * (d - mean);
    var /= double(m - 1);
    rep.sample_var_ratio = var / sg.value;
  }
  return rep;
}

}  // namespace sphstat
