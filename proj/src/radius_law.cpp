#include "radius_law.hpp"

#include <charconv>
#include <cmath>

#include "common.hpp"
#include "rng.hpp"

namespace sphstat {

RadiusLaw RadiusLaw::uniform(double a, double b) {
  RadiusLaw l;
  l.kind = RadiusKind::Uniform;
  l.a = a;
  l.b = b;
  l.validate();
  return l;
}

RadiusLaw RadiusLaw::exponential(double rate) {
  RadiusLaw l;
  l.kind = RadiusKind::Exponential;
  l.rate = rate;
  l.validate();
  return l;
}

RadiusLaw RadiusLaw::deterministic(double r0) {
  RadiusLaw l;
  l.kind = RadiusKind::Deterministic;
  l.r0 = r0;
  l.validate();
  return l;
}

RadiusLaw RadiusLaw::parse(const std::string& spec) {
  auto bad = [&] { return Error(Errc::invalid_argument, "bad radius spec: " + spec); };
  size_t c1 = spec.find(':');
  if (c1 == std::string::npos) throw bad();
  std::string name = spec.substr(0, c1);
  try {
    if (name == "uniform") {
      size_t c2 = spec.find(':', c1 + 1);
      if (c2 == std::string::npos) throw bad();
      return uniform(std::stod(spec.substr(c1 + 1, c2 - c1 - 1)), std::stod(spec.substr(c2 + 1)));
    }
    if (name == "exp") return exponential(std::stod(spec.substr(c1 + 1)));
    if (name == "det") return deterministic(std::stod(spec.substr(c1 + 1)));
  } catch (const std::logic_error&) {
    throw bad();
  }
  throw bad();
}

std::string RadiusLaw::spec() const {
  // shortest round-trip form so specs survive parse(spec()) and stay readable
  auto num = [](double v) {
    char b[32];
    auto res = std::to_chars(b, b + sizeof b, v);
    return std::string(b, res.ptr);
  };
  switch (kind) {
    case RadiusKind::Uniform:
      return "uniform:" + num(a) + ":" + num(b);
    case RadiusKind::Exponential:
      return "exp:" + num(rate);
    case RadiusKind::Deterministic:
      break;
  }
  return "det:" + num(r0);
}

void RadiusLaw::validate() const {
  switch (kind) {
    case RadiusKind::Uniform:
      if (!(a >= 0) || !(b > a))
        throw Error(Errc::invalid_argument, "uniform radius law needs 0 <= a < b");
      break;
    case RadiusKind::Exponential:
      if (!(rate > 0)) throw Error(Errc::invalid_argument, "exponential radius law needs rate > 0");
      break;
    case RadiusKind::Deterministic:
      if (!(r0 > 0))
        throw Error(Errc::invalid_argument,
                    "deterministic radius law needs r0 > 0 (grains must have positive "
                    "radius with positive probability)");
      break;
  }
}

double RadiusLaw::moment(int k) const {
  if (k < 0) throw Error(Errc::invalid_argument, "negative moment order");
  if (k == 0) return 1.0;
  switch (kind) {
    case RadiusKind::Uniform:
      return (std::pow(b, k + 1) - std::pow(a, k + 1)) / ((k + 1) * (b - a));
    case RadiusKind::Exponential: {
      double m = 1.0;
      for (int i = 1; i <= k; ++i) m *= double(i) / rate;
      return m;
    }
    case RadiusKind::Deterministic:
      return std::pow(r0, k);
  }
  return 0.0;
}

double RadiusLaw::cdf(double r) const {
  if (r < 0) return 0.0;
  switch (kind) {
    case RadiusKind::Uniform:
      if (r <= a) return r < a ? 0.0 : (a == b ? 1.0 : 0.0);
      if (r >= b) return 1.0;
      return (r - a) / (b - a);
    case RadiusKind::Exponential:
      return -std::expm1(-rate * r);
    case RadiusKind::Deterministic:
      return r >= r0 ? 1.0 : 0.0;
  }
  return 0.0;
}

double RadiusLaw::quantile(double p) const {
  if (!(p >= 0.0) || p >= 1.0)
    throw Error(Errc::invalid_argument, "quantile needs p in [0,1)");
  switch (kind) {
    case RadiusKind::Uniform:
      return a + p * (b - a);
    case RadiusKind::Exponential:
      return -std::log1p(-p) / rate;
    case RadiusKind::Deterministic:
      return r0;
  }
  return 0.0;
}

double RadiusLaw::sample(Rng& rng) const {
  switch (kind) {
    case RadiusKind::Uniform:
      return rng.uniform(a, b);
    case RadiusKind::Exponential:
      return rng.expo(rate);
    case RadiusKind::Deterministic:
      return r0;
  }
  return 0.0;
}

double RadiusLaw::cap(double tail) const {
  switch (kind) {
    case RadiusKind::Uniform:
      return b;
    case RadiusKind::Exponential:
      // -log(tail) directly; forming 1 - tail first would cost ~tail relative
      // accuracy in the subtraction
      return -std::log(tail) / rate;
    case RadiusKind::Deterministic:
      return r0;
  }
  return 0.0;
}

std::vector<double> RadiusLaw::cdf_breakpoints() const {
  switch (kind) {
    case RadiusKind::Uniform:
      return {a, b};
    case RadiusKind::Exponential:
      return {0.0};
    case RadiusKind::Deterministic:
      return {r0};
  }
  return {};
}

void RadiusLaw::cvm_support(double* lo, double* hi) const {
  switch (kind) {
    case RadiusKind::Uniform:
      *lo = a;
      *hi = b;
      return;
    case RadiusKind::Exponential:
      *lo = 0.0;
      *hi = quantile(0.999);
      return;
    case RadiusKind::Deterministic:
      *lo = 0.0;
      *hi = r0;
      return;
  }
}

}  // namespace sphstat
