#include <algorithm>
#include <cmath>
#include <vector>

#include "common.hpp"
#include "distances.hpp"
#include "doctest.h"
#include "measure.hpp"
#include "radius_law.hpp"
#include "rng.hpp"

using namespace sphstat;

TEST_CASE("radius sets and their complements") {
  RadiusSet c = RadiusSet::interval(0.06, 0.08);
  CHECK(c.contains(0.06));
  CHECK(c.contains(0.08));
  CHECK(!c.contains(0.05));
  RadiusSet cc = c.complement();
  CHECK(!cc.contains(0.06));
  CHECK(!cc.contains(0.07));
  CHECK(cc.contains(0.05));
  CHECK(cc.contains(0.09));
  CHECK(cc.contains(0.0));
  CHECK(RadiusSet::all().is_all());
  CHECK(RadiusSet::all().contains(123.0));
}

TEST_CASE("law mass respects atoms and endpoints") {
  RadiusLaw u = RadiusLaw::uniform(0.05, 0.1);
  CHECK(RadiusSet::interval(0.06, 0.08).law_mass(u) == doctest::Approx(0.4).epsilon(1e-13));
  CHECK(RadiusSet::interval(0.06, 0.08).complement().law_mass(u) ==
        doctest::Approx(0.6).epsilon(1e-13));
  CHECK(RadiusSet::all().law_mass(u) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(RadiusSet::interval(0.2, 0.3).law_mass(u) == 0.0);

  RadiusLaw d = RadiusLaw::deterministic(0.07);
  RadiusSet atom = RadiusSet::interval(0.07, 0.07);
  CHECK(atom.law_mass(d) == 1.0);
  CHECK(atom.complement().law_mass(d) == 0.0);
  CHECK(RadiusSet::interval(0.0, 0.06).law_mass(d) == 0.0);

  RadiusLaw e = RadiusLaw::exponential(10.0);
  double med = e.quantile(0.5);
  CHECK(RadiusSet::interval(0.0, med).law_mass(e) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("builder merges atoms and the measure splits mass exactly") {
  MeasureBuilder b;
  b.add(0.07, 0.3);
  b.add(0.05, 0.2);
  b.add(0.09, 0.5);
  b.add(0.06, 0.0);  // ignored
  WeightedRadiusMeasure m = b.finish();
  REQUIRE(m.size() == 3);
  CHECK(m.radii[0] == 0.05);
  CHECK(m.radii[2] == 0.09);
  CHECK(m.total == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.mass(RadiusSet::interval(0.06, 0.08)) == 0.3);
  CHECK(estimate_ratio(m, RadiusSet::interval(0.06, 0.08)) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(estimate_ratio(m, RadiusSet::all()) == 1.0);
  RadiusSet c = RadiusSet::interval(0.06, 0.08);
  CHECK(m.mass(c) + m.mass(c.complement()) == doctest::Approx(m.total).epsilon(1e-12));

  MeasureBuilder dup;
  dup.add(0.05, 0.2);
  dup.add(0.05, 0.2);
  WeightedRadiusMeasure md = dup.finish();
  REQUIRE(md.size() == 1);
  CHECK(md.weights[0] == doctest::Approx(0.4).epsilon(1e-15));

  WeightedRadiusMeasure null_m;
  CHECK(!null_m.normalizable());
  CHECK(std::isnan(estimate_ratio(null_m, RadiusSet::all())));
}

TEST_CASE("step cdf evaluation") {
  MeasureBuilder b;
  b.add(0.05, 0.2);
  b.add(0.07, 0.3);
  b.add(0.09, 0.5);
  StepCdf cdf = StepCdf::from_measure(b.finish());
  REQUIRE(cdf.valid());
  CHECK(cdf.at(0.04) == 0.0);
  CHECK(cdf.at(0.05) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(cdf.left_at(0.05) == 0.0);
  CHECK(cdf.at(0.06) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(cdf.left_at(0.07) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(cdf.at(0.07) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(cdf.at(0.09) == 1.0);  // final level pinned to one
  CHECK(cdf.at(5.0) == 1.0);
  CHECK(!StepCdf::from_measure(WeightedRadiusMeasure{}).valid());
}

TEST_CASE("averaging step cdfs") {
  MeasureBuilder a, b;
  a.add(0.05, 1.0);
  b.add(0.1, 2.0);
  StepCdf ca = StepCdf::from_measure(a.finish());
  StepCdf cb = StepCdf::from_measure(b.finish());
  StepCdf avg = StepCdf::average({ca, cb});
  CHECK(avg.at(0.04) == 0.0);
  CHECK(avg.at(0.07) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(avg.at(0.1) == 1.0);
  StepCdf with_invalid = StepCdf::average({ca, StepCdf{}});
  CHECK(with_invalid.at(0.07) == 1.0);
  CHECK(!StepCdf::average({StepCdf{}, StepCdf{}}).valid());
}

namespace {

StepCdf point_mass(double r) {
  MeasureBuilder b;
  b.add(r, 1.0);
  return StepCdf::from_measure(b.finish());
}

}  // namespace

TEST_CASE("distances on hand cases") {
  CHECK(ks_distance(point_mass(0.07), RadiusLaw::deterministic(0.07)) == 0.0);
  CHECK(ks_distance(point_mass(0.05), RadiusLaw::uniform(0.05, 0.1)) == 1.0);
  CHECK(ks_distance(point_mass(0.075), RadiusLaw::uniform(0.05, 0.1)) ==
        doctest::Approx(0.5).epsilon(1e-14));
  CHECK(cvm_distance(point_mass(0.075), RadiusLaw::uniform(0.05, 0.1)) ==
        doctest::Approx(1.0 / 12.0).epsilon(1e-13));
  CHECK(cvm_distance(point_mass(0.07), RadiusLaw::deterministic(0.07)) ==
        doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(ks_distance(StepCdf{}, RadiusLaw::uniform(0.05, 0.1)), Error);
  CHECK_THROWS_AS(cvm_distance(StepCdf{}, RadiusLaw::uniform(0.05, 0.1)), Error);
}

TEST_CASE("distances against brute evaluation") {
  Rng rng(97531);
  std::vector<RadiusLaw> laws = {RadiusLaw::uniform(0.05, 0.1), RadiusLaw::exponential(10.0),
                                 RadiusLaw::deterministic(0.07)};
  for (int trial = 0; trial < 3; ++trial) {
    MeasureBuilder b;
    for (int i = 0; i < 20; ++i) b.add(rng.uniform(0.04, 0.12), rng.uniform(0.1, 1.0));
    WeightedRadiusMeasure m = b.finish();
    StepCdf est = StepCdf::from_measure(m);
    for (const RadiusLaw& law : laws) {
      // |est - G| on an interval where both are monotone and est is flat
      // peaks at the ends, so checking both sides of every jump is exact
      std::vector<double> pts = est.s;
      for (double bp : law.cdf_breakpoints()) pts.push_back(bp);
      double sup = 0.0;
      for (double s : pts) {
        sup = std::max(sup, std::abs(est.at(s) - law.cdf(s)));
        double left = s - 1e-9;
        if (left >= 0) sup = std::max(sup, std::abs(est.left_at(s) - law.cdf(left)));
      }
      CHECK(std::abs(ks_distance(est, law) - sup) < 1e-7);

      double lo = 0, hi = 0;
      law.cvm_support(&lo, &hi);
      REQUIRE(hi > lo);
      const int n = 2000000;
      double h = (hi - lo) / n, acc = 0.0;
      for (int i = 0; i < n; ++i) {
        double s = lo + (i + 0.5) * h;
        double d = est.at(s) - law.cdf(s);
        acc += d * d;
      }
      double want = acc * h / (hi - lo);
      double got = cvm_distance(est, law);
      CHECK(got >= 0.0);
      CHECK(std::isfinite(got));
      CHECK(std::abs(got - want) < 5e-5);
    }
  }
}
