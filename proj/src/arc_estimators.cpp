#include "arc_estimators.hpp"

#include <algorithm>
#include <cmath>

#include "common.hpp"

namespace sphstat {

namespace {

bool circle_meets_box(const double* c, double rho, const Window& W) {
  double dmin2 = 0.0, dmax2 = 0.0;
  for (int i = 0; i < 2; ++i) {
    double lo = W.lo[i] - c[i], hi = W.hi[i] - c[i];
    double nearv = std::clamp(0.0, lo, hi);
    double farv = std::max(std::abs(lo), std::abs(hi));
    dmin2 += nearv * nearv;
    dmax2 += farv * farv;
  }
  return dmin2 <= rho * rho && rho * rho <= dmax2;
}

bool point_covered_by_other(const Realization& r, std::size_t self, const double* z) {
  for (std::size_t g = 0; g < r.count(); ++g) {
    if (g == self) continue;
    double dx = z[0] - r.centers[2 * g], dy = z[1] - r.centers[2 * g + 1];
    if (dx * dx + dy * dy <= r.radii[g] * r.radii[g]) return true;
  }
  return false;
}

}  // namespace

ArcDecomposition visible_arcs(const Realization& r, const Window& region) {
  if (r.dim != 2) throw Error(Errc::unsupported, "arc estimators are planar only");
  ArcDecomposition out;
  std::vector<std::pair<double, double>> covers;
  for (std::size_t i = 0; i < r.count(); ++i) {
    const double* ci = r.center(i);
    double Ri = r.radii[i];
    if (Ri == 0.0) {
      if (!region.contains(ci)) continue;
      GrainArcs ga;
      ga.germ = std::int64_t(i);
      ga.radius = 0.0;
      ga.visible = point_covered_by_other(r, i, ci) ? AngleSet::none() : AngleSet::full();
      out.grains.push_back(std::move(ga));
      continue;
    }
    if (!circle_meets_box(ci, Ri, region)) continue;
    covers.clear();
    bool swallowed = false;
    for (std::size_t j = 0; j < r.count() && !swallowed; ++j) {
      if (j == i) continue;
      double Rj = r.radii[j];
      double dx = r.centers[2 * j] - ci[0], dy = r.centers[2 * j + 1] - ci[1];
      double d = std::sqrt(dx * dx + dy * dy);
      if (d >= Ri + Rj) continue;
      if (d + Ri <= Rj) {
        swallowed = true;  // whole circle inside grain j
        break;
      }
      if (d + Rj <= Ri) continue;  // grain j inside this grain, boundary untouched
      // angular half-width of the covered cap around the direction of grain j
      double q = (d * d + Ri * Ri - Rj * Rj) / (2.0 * d * Ri);
      double half = std::acos(std::clamp(q, -1.0, 1.0));
      double center = std::atan2(dy, dx);
      covers.emplace_back(center - half, center + half);
    }
    GrainArcs ga;
    ga.germ = std::int64_t(i);
    ga.radius = Ri;
    ga.visible = swallowed ? AngleSet::none() : AngleSet::union_of(covers).complement();
    if (!ga.visible.empty()) out.grains.push_back(std::move(ga));
  }
  return out;
}

AngleSet angles_inside_box(const double* c, double rho, const Window& W) {
  auto cos_ge = [&](double a) {  // {theta: cos(theta) >= a}
    if (a <= -1.0) return AngleSet::full();
    if (a > 1.0) return AngleSet::none();
    return AngleSet::arc(0.0, std::acos(std::clamp(a, -1.0, 1.0)));
  };
  auto shifted = [&](double a, double shift) {
    AngleSet base = cos_ge(a);
    std::vector<std::pair<double, double>> moved;
    for (const auto& [s, e] : base.parts()) moved.emplace_back(s + shift, e + shift);
    return AngleSet::union_of(moved);
  };
  // cos >= a ; cos <= b ; sin >= a' ; sin <= b'
  AngleSet s = cos_ge((W.lo[0] - c[0]) / rho);
  s = s.intersect(shifted(-(W.hi[0] - c[0]) / rho, kPi));     // cos <= b: cos(theta-pi) >= -b
  s = s.intersect(shifted((W.lo[1] - c[1]) / rho, kPi / 2));  // sin >= a': cos(theta-pi/2) >= a'
  s = s.intersect(shifted(-(W.hi[1] - c[1]) / rho, -kPi / 2));
  return s;
}

WeightedRadiusMeasure estimate_limit_spherical(const Realization& r, const ArcDecomposition& arcs,
                                               const Window& W) {
  MeasureBuilder b;
  for (const GrainArcs& ga : arcs.grains) {
    if (ga.visible.empty()) continue;
    if (ga.radius == 0.0) {
      const double* c = r.center(std::size_t(ga.germ));
      if (W.contains(c)) b.add(0.0, 1.0);  // l/(2 pi rho) -> 1 for an exposed point grain
      continue;
    }
    double len = ga.visible.intersect(angles_inside_box(r.center(std::size_t(ga.germ)),
                                                        ga.radius, W))
                     .length();
    if (len > 0.0) b.add(ga.radius, len / kTau);  // rho*len / (2 pi rho)
  }
  return b.finish();
}

WeightedRadiusMeasure estimate_limit_linear(const Realization& r, const ArcDecomposition& arcs,
                                            const Window& W, const double* u,
                                            bool* dropped_zero_radius) {
  if (dropped_zero_radius) *dropped_zero_radius = false;
  double phi = std::atan2(u[1], u[0]);
  MeasureBuilder b;
  for (const GrainArcs& ga : arcs.grains) {
    if (ga.visible.empty()) continue;
    if (ga.radius == 0.0) {
      // the directional weight l_i(u)/r_i is undefined at radius 0
      const double* c = r.center(std::size_t(ga.germ));
      if (W.contains(c) && dropped_zero_radius) *dropped_zero_radius = true;
      continue;
    }
    const double* c = r.center(std::size_t(ga.germ));
    AngleSet eff = ga.visible.intersect(angles_inside_box(c, ga.radius, W));
    // front side: normal direction opposing u, i.e. theta - phi in (pi/2, 3pi/2)
    eff = eff.intersect(AngleSet::arc(phi + kPi, kPi / 2));
    double w = 0.0;
    for (const auto& [a, e] : eff.parts()) {
      double psi = norm_angle(a - phi);
      double len = e - a;
      // sin is decreasing on the front range, so this is nonnegative
      w += std::sin(psi) - std::sin(psi + len);
    }
    if (w > 0.0) b.add(ga.radius, w);
  }
  return b.finish();
}

StepCdf estimate_limit_linear_combined(const Realization& r, const ArcDecomposition& arcs,
                                       const Window& W) {
  const double dirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  std::vector<StepCdf> parts;
  for (const auto& d : dirs)
    parts.push_back(StepCdf::from_measure(estimate_limit_linear(r, arcs, W, d)));
  return StepCdf::average(parts);
}

}  // namespace sphstat
