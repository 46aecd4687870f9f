#include <algorithm>
#include <cmath>
#include <vector>

#include "arc_estimators.hpp"
#include "boolean_model.hpp"
#include "common.hpp"
#include "doctest.h"
#include "intervals.hpp"
#include "measure.hpp"
#include "rng.hpp"

using namespace sphstat;

namespace {

Realization make_real(std::vector<double> centers, std::vector<double> radii) {
  Realization r;
  r.dim = 2;
  r.centers = std::move(centers);
  r.radii = std::move(radii);
  r.window = Window::box2(0, 0, 1, 1);
  r.margin = 0.3;
  r.sim_window = r.window.dilated(0.3);
  r.params.gamma = 1.0;
  r.params.radii = RadiusLaw::uniform(0.01, 0.3);
  r.params.dim = 2;
  r.seed = 0;
  return r;
}

const GrainArcs* find_germ(const ArcDecomposition& d, std::int64_t g) {
  for (const auto& a : d.grains)
    if (a.germ == g) return &a;
  return nullptr;
}

}  // namespace

TEST_CASE("angles inside a box") {
  Window w = Window::box2(0, 0, 1, 1);
  double c[2] = {0.05, 0.5};
  CHECK(angles_inside_box(c, 0.1, w).length() ==
        doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-12));
  double mid[2] = {0.5, 0.5};
  CHECK(angles_inside_box(mid, 0.2, w).length() == doctest::Approx(kTau).epsilon(1e-12));
  double on_edge[2] = {0.0, 0.5};
  CHECK(angles_inside_box(on_edge, 0.2, w).length() == doctest::Approx(kPi).epsilon(1e-12));
  double tangent[2] = {0.2, 0.5};
  double len = angles_inside_box(tangent, 0.2, w).length();
  CHECK(std::isfinite(len));
  CHECK(len == doctest::Approx(kTau).epsilon(1e-7));
  double outside[2] = {-0.5, 0.5};
  CHECK(angles_inside_box(outside, 0.1, w).empty());
}

TEST_CASE("visibility of an isolated circle") {
  Realization r = make_real({0.5, 0.5}, {0.2});
  ArcDecomposition d = visible_arcs(r, r.window);
  const GrainArcs* a = find_germ(d, 0);
  REQUIRE(a != nullptr);
  CHECK(a->visible.length() == doctest::Approx(kTau).epsilon(1e-12));

  WeightedRadiusMeasure m = estimate_limit_spherical(r, d, r.window);
  REQUIRE(m.size() == 1);
  CHECK(m.radii[0] == 0.2);
  CHECK(m.weights[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a swallowed circle is invisible") {
  Realization r = make_real({0.5, 0.5, 0.5, 0.5}, {0.2, 0.1});
  ArcDecomposition d = visible_arcs(r, r.window);
  const GrainArcs* small = find_germ(d, 1);
  if (small) CHECK(small->visible.empty());
  WeightedRadiusMeasure m = estimate_limit_spherical(r, d, r.window);
  REQUIRE(m.size() == 1);
  CHECK(m.radii[0] == 0.2);
  CHECK(m.weights[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("two crossing circles expose the textbook angles") {
  double r1 = 0.15, r2 = 0.12, dist = 0.2;
  Realization r = make_real({0.4, 0.5, 0.6, 0.5}, {r1, r2});
  ArcDecomposition d = visible_arcs(r, r.window);
  const GrainArcs* a = find_germ(d, 0);
  const GrainArcs* b = find_germ(d, 1);
  REQUIRE(a != nullptr);
  REQUIRE(b != nullptr);
  double alpha1 = std::acos((dist * dist + r1 * r1 - r2 * r2) / (2 * dist * r1));
  double alpha2 = std::acos((dist * dist + r2 * r2 - r1 * r1) / (2 * dist * r2));
  CHECK(a->visible.length() == doctest::Approx(kTau - 2 * alpha1).epsilon(1e-12));
  CHECK(b->visible.length() == doctest::Approx(kTau - 2 * alpha2).epsilon(1e-12));
}

TEST_CASE("boundary clipping scales the spherical weight") {
  Realization r = make_real({0.05, 0.5}, {0.1});
  ArcDecomposition d = visible_arcs(r, r.window);
  WeightedRadiusMeasure m = estimate_limit_spherical(r, d, r.window);
  REQUIRE(m.size() == 1);
  CHECK(m.weights[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("directional weights of a single grain") {
  Realization r = make_real({0.5, 0.5}, {0.2});
  ArcDecomposition d = visible_arcs(r, r.window);
  for (auto [ux, uy] : {std::pair{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}}) {
    double u[2] = {ux, uy};
    bool dropped = true;
    WeightedRadiusMeasure m = estimate_limit_linear(r, d, r.window, u, &dropped);
    CHECK(!dropped);
    REQUIRE(m.size() == 1);
    CHECK(m.radii[0] == 0.2);
    CHECK(m.weights[0] == doctest::Approx(2.0).epsilon(1e-12));
  }
  StepCdf combined = estimate_limit_linear_combined(r, d, r.window);
  REQUIRE(combined.valid());
  CHECK(combined.at(0.19) == 0.0);
  CHECK(combined.at(0.2) == 1.0);
}

TEST_CASE("directional weights of a half grain on the floor") {
  double rho = 0.2;
  Realization r = make_real({0.5, 0.0}, {rho});
  ArcDecomposition d = visible_arcs(r, r.window);
  double plus_x[2] = {1, 0}, plus_y[2] = {0, 1}, minus_y[2] = {0, -1};
  WeightedRadiusMeasure mx = estimate_limit_linear(r, d, r.window, plus_x);
  REQUIRE(mx.size() == 1);
  CHECK(mx.weights[0] == doctest::Approx(1.0).epsilon(1e-12));
  WeightedRadiusMeasure mup = estimate_limit_linear(r, d, r.window, plus_y);
  CHECK(mup.total == doctest::Approx(0.0).epsilon(1e-12));
  WeightedRadiusMeasure mdn = estimate_limit_linear(r, d, r.window, minus_y);
  REQUIRE(mdn.size() == 1);
  CHECK(mdn.weights[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("zero radius grains") {
  Realization r = make_real({0.3, 0.3, 0.7, 0.7}, {0.0, 0.1});
  ArcDecomposition d = visible_arcs(r, r.window);
  WeightedRadiusMeasure ms = estimate_limit_spherical(r, d, r.window);
  REQUIRE(ms.size() == 2);
  CHECK(ms.radii[0] == 0.0);
  CHECK(ms.weights[0] == doctest::Approx(1.0).epsilon(1e-12));
  double u[2] = {1, 0};
  bool dropped = false;
  WeightedRadiusMeasure ml = estimate_limit_linear(r, d, r.window, u, &dropped);
  CHECK(dropped);
  REQUIRE(ml.size() == 1);
  CHECK(ml.radii[0] == 0.1);

  // covered point grains leave nothing behind
  Realization rc = make_real({0.3, 0.3, 0.3, 0.3}, {0.0, 0.05});
  ArcDecomposition dc = visible_arcs(rc, rc.window);
  WeightedRadiusMeasure mc = estimate_limit_spherical(rc, dc, rc.window);
  REQUIRE(mc.size() == 1);
  CHECK(mc.radii[0] == 0.05);

  // nothing usable at all
  Realization rz = make_real({0.3, 0.3}, {0.0});
  ArcDecomposition dz = visible_arcs(rz, rz.window);
  StepCdf combined = estimate_limit_linear_combined(rz, dz, rz.window);
  CHECK(!combined.valid());
}

TEST_CASE("visibility agrees with pointwise coverage") {
  ModelParams p;
  p.gamma = 60.0;
  p.radii = RadiusLaw::uniform(0.03, 0.08);
  p.dim = 2;
  Window w = Window::box2(0, 0, 0.7, 0.7);
  Realization r = sample_realization(p, w, 0.2, 24601);
  REQUIRE(r.count() > 5);
  ArcDecomposition d = visible_arcs(r, w);
  REQUIRE(!d.grains.empty());
  Rng rng(1122);
  auto covered_by_other = [&](std::int64_t g, const double* y, double* clearance) {
    bool cov = false;
    double nearest = kInf;
    for (std::size_t j = 0; j < r.count(); ++j) {
      if (std::int64_t(j) == g) continue;
      double dx = y[0] - r.center(j)[0], dy = y[1] - r.center(j)[1];
      double dd = std::sqrt(dx * dx + dy * dy);
      nearest = std::min(nearest, std::abs(dd - r.radii[j]));
      if (dd <= r.radii[j]) cov = true;
    }
    *clearance = nearest;
    return cov;
  };
  for (const GrainArcs& a : d.grains) {
    double rho = a.radius;
    const double* c = r.center(std::size_t(a.germ));
    int n = 3000, uncov = 0, used = 0;
    for (int i = 0; i < n; ++i) {
      double th = rng.uniform(0.0, kTau);
      double y[2] = {c[0] + rho * std::cos(th), c[1] + rho * std::sin(th)};
      double clearance = kInf;
      bool cov = covered_by_other(a.germ, y, &clearance);
      if (clearance < 1e-9) continue;  // grazing samples are ambiguous in fp
      ++used;
      if (!cov) ++uncov;
      CHECK(a.visible.contains(th) == !cov);
    }
    double frac = a.visible.length() / kTau;
    double phat = double(uncov) / std::max(used, 1);
    double se = std::sqrt(std::max(frac * (1 - frac), 1e-4) / std::max(used, 1));
    CHECK(std::abs(phat - frac) < 4.0 * se + 1e-3);
  }
}
