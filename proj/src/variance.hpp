#pragma once

#include <cstdint>
#include <vector>

#include "boolean_model.hpp"
#include "empty_space.hpp"
#include "measure.hpp"

namespace sphstat {

struct QmcOptions {
  int points_per_shift = 16384;
  int shifts = 16;
  std::uint64_t seed = 0x5eed0001ULL;
  bool check_bounds = true;  // verify two-point survival bounds per sample
};

struct VarianceResult {
  double value = 0.0;  // sigma^2(C)
  double se = 0.0;     // spread across randomized shifts
  double tau1 = 0.0;   // first-order part, gamma * integral
  double tau2 = 0.0;   // second-order part, gamma^2 * integral
};

// Asymptotic per-volume variance of the weighted contact measure of radius
// class C. Unit-ball gauge, planar model.
VarianceResult sigma2(const RadiusSet& C, const ModelParams& p, const WeightFunction& f,
                      const QmcOptions& opt);

struct SigmaG2Result {
  double value = 0.0;  // from the three-class variance combination
  double se = 0.0;
  double alt_value = 0.0;  // from the centered-weight representation
  double alt_se = 0.0;
  double beta = 0.0;
  double g_mass = 0.0;  // G(C)
};

// Asymptotic variance of the ratio estimate of G(C); both computation paths.
SigmaG2Result sigma_G2(const RadiusSet& C, const ModelParams& p, const WeightFunction& f,
                       const QmcOptions& opt);

struct VarianceCurvePoint {
  double n = 0.0;
  double window_volume = 0.0;
  double mean_mass = 0.0;
  double normalized_variance = 0.0;  // sample variance of the mass / |W_n|
  int reps = 0;
};

// Sample variance of the discretized contact measure over growing windows
// W_n = [-n, n)^2, normalized by window area.
std::vector<VarianceCurvePoint> empirical_variance_curve(const RadiusSet& C,
                                                         const ModelParams& p,
                                                         const WeightFunction& f,
                                                         double grid_h,
                                                         const std::vector<double>& n_list,
                                                         int reps, std::uint64_t seed);

struct CltReport {
  int reps = 0;
  int aborted = 0;  // replications with a null estimate
  double window_volume = 0.0;
  double g_target = 0.0;
  double sigma_g2 = 0.0;
  std::vector<double> stats;  // sqrt(|W|) (Ghat - G(C)) / sigma_G
  double ks_stat = 0.0;
  double ks_p = 0.0;
  double sample_var_ratio = 0.0;  // sample var of sqrt(|W|)(Ghat - G) over sigma_G^2
};

// Replicated ratio estimates on W_n = [-n, n)^2 against the normal limit.
CltReport clt_campaign(const RadiusSet& C, const ModelParams& p, const WeightFunction& f,
                       double n, int reps, double grid_h, std::uint64_t seed,
                       const QmcOptions& qopt);

// P(sup of a Brownian bridge > x): asymptotic Kolmogorov tail.
double kolmogorov_tail(double x);
double standard_normal_cdf(double x);

// First-order integral with the two-point survival forced to 1. Its exact
// value is G(C) * (int f dt)^2, which makes it an end-to-end check of the
// integrator's geometry and sampling.
double tau1_integral_survival_one(const RadiusSet& C, const ModelParams& p,
                                  const WeightFunction& f, const QmcOptions& opt,
                                  double* se_out);

}  // namespace sphstat
