#pragma once

#include <functional>
#include <vector>

namespace sphstat {

// Recursive Simpson refinement to the given relative tolerance (with an
// absolute floor for integrals near zero).
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, double abs_floor = 1e-300);

// Nodes and weights on [-1, 1], computed once per order by Newton iteration
// on the Legendre recurrence (accurate to ~1e-15).
struct GaussRule {
  std::vector<double> x, w;
};
const GaussRule& gauss_legendre(int n);

double gauss_integrate(const std::function<double(double)>& f, double a, double b, int n = 64);

}  // namespace sphstat
