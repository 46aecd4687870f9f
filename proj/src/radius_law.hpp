#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sphstat {

struct Rng;

enum class RadiusKind { Uniform, Exponential, Deterministic };

// Distribution of the grain radius R. Must have P(R > 0) > 0; moments up to
// order 2*dim are required by the model, finite here for every member.
struct RadiusLaw {
  RadiusKind kind = RadiusKind::Deterministic;
  double a = 0.0, b = 0.0;  // Uniform on [a, b]
  double rate = 0.0;        // Exponential
  double r0 = 0.0;          // Deterministic

  static RadiusLaw uniform(double a, double b);
  static RadiusLaw exponential(double rate);
  static RadiusLaw deterministic(double r0);
  // "uniform:a:b" | "exp:rate" | "det:r0"
  static RadiusLaw parse(const std::string& spec);
  std::string spec() const;

  void validate() const;

  double moment(int k) const;  // E R^k, closed form
  double cdf(double r) const;
  double quantile(double p) const;  // p in [0,1)
  double sample(Rng& rng) const;

  bool bounded() const { return kind != RadiusKind::Exponential; }
  // Upper bound of the effective support; Exponential laws are cut at the
  // 1 - tail quantile.
  double cap(double tail = 1e-8) const;

  // Discontinuities / kinks of the cdf, for exact sup-distance evaluation.
  std::vector<double> cdf_breakpoints() const;
  // Interval used to normalize integral-type discrepancies: the smallest
  // interval carrying all mass, with unbounded laws cut at the 0.999 quantile.
  void cvm_support(double* lo, double* hi) const;
};

}  // namespace sphstat
