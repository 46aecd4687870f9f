#include "quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "common.hpp"

namespace sphstat {

namespace {

double simpson(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double b, double fa,
                     double fm, double fb, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(fa, flm, fm, m - a);
  double right = simpson(fm, frm, fb, b - m);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, double abs_floor) {
  if (!(b > a)) return 0.0;
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = simpson(fa, fm, fb, b - a);
  double tol = std::max(std::abs(whole) * rel_tol, abs_floor);
  // Two fixed subdivisions up front guard against symmetric integrands
  // fooling the first error estimate.
  double m = 0.5 * (a + b);
  double f1 = f(0.5 * (a + m)), f2 = f(0.5 * (m + b));
  double left = simpson(fa, f1, fm, m - a);
  double right = simpson(fm, f2, fb, b - m);
  return adaptive_step(f, a, m, fa, f1, fm, left, 0.5 * tol, 48) +
         adaptive_step(f, m, b, fm, f2, fb, right, 0.5 * tol, 48);
}

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (n < 1) throw Error(Errc::invalid_argument, "gauss rule order must be >= 1");
  GaussRule rule;
  rule.x.resize(size_t(n));
  rule.w.resize(size_t(n));
  int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.x[size_t(i)] = -x;
    rule.w[size_t(i)] = w;
    rule.x[size_t(n - 1 - i)] = x;
    rule.w[size_t(n - 1 - i)] = w;
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

double gauss_integrate(const std::function<double(double)>& f, double a, double b, int n) {
  if (!(b > a)) return 0.0;
  const GaussRule& rule = gauss_legendre(n);
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double sum = 0.0;
  for (size_t i = 0; i < rule.x.size(); ++i) sum += rule.w[i] * f(c + h * rule.x[i]);
  return sum * h;
}

}  // namespace sphstat
