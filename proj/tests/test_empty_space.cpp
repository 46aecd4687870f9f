#include <algorithm>
#include <cmath>

#include "boolean_model.hpp"
#include "common.hpp"
#include "doctest.h"
#include "empty_space.hpp"
#include "gauge.hpp"
#include "rng.hpp"

using namespace sphstat;

namespace {

ModelParams model_u(double gamma, int dim = 2) {
  ModelParams p;
  p.gamma = gamma;
  p.radii = RadiusLaw::uniform(0.05, 0.1);
  p.dim = dim;
  return p;
}

constexpr double kER = 0.075;
constexpr double kER2 = 7.0 / 1200.0;
constexpr double kER3 = 4.6875e-4;

}  // namespace

TEST_CASE("weight functions") {
  WeightFunction f = WeightFunction::band(0.05);
  CHECK(f(0.0) == 0.0);
  CHECK(f(0.01) == doctest::Approx(20.0).epsilon(1e-15));
  CHECK(f(0.05) == doctest::Approx(20.0).epsilon(1e-15));
  CHECK(f(0.051) == 0.0);
  CHECK(f.support_hi() == 0.05);
  CHECK(f.integral() == doctest::Approx(1.0).epsilon(1e-15));

  WeightFunction g = WeightFunction::tabulated({{0.0, 0.0}, {0.1, 2.0}, {0.2, 0.0}});
  CHECK(g(0.05) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g(0.15) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g(0.25) == 0.0);
  CHECK(g.integral() == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(g.support_hi() == 0.2);

  CHECK_THROWS_AS(WeightFunction::band(0.0).validate(), Error);
  CHECK_THROWS_AS(WeightFunction::tabulated({{0.0, 1.0}}).validate(), Error);
  CHECK_THROWS_AS(WeightFunction::tabulated({{0.1, 1.0}, {0.1, 2.0}}).validate(), Error);
  CHECK_THROWS_AS(WeightFunction::tabulated({{0.0, 0.0}, {0.1, -1.0}}).validate(), Error);
  CHECK_THROWS_AS(WeightFunction::tabulated({{0.0, 1.0}, {0.1, 1.0}}).validate(), Error);
}

TEST_CASE("vacancy survival closed forms") {
  ModelParams p = model_u(25.0);
  GaugeBody ball = GaugeBody::ball(2);
  GaugeBody seg = GaugeBody::segment2(1.0, 0.0);

  // at t = 0 both gauges reduce to the covered-area fraction
  CHECK(empty_space_F(0.0, p, ball) == doctest::Approx(0.36754672121886574806).epsilon(1e-12));
  CHECK(empty_space_Fbar(0.0, p, seg) == doctest::Approx(0.63245327878113425194).epsilon(1e-12));

  CHECK(empty_space_Fbar(0.05, p, ball) ==
        doctest::Approx(0.28835956382693602524).epsilon(1e-12));
  CHECK(empty_space_Fbar(0.2, p, ball) ==
        doctest::Approx(0.0025904178805833125633).epsilon(1e-12));
  CHECK(empty_space_Fbar(0.05, p, seg) ==
        doctest::Approx(0.52432218399822663236).epsilon(1e-12));
  CHECK(empty_space_Fbar(0.2, p, seg) ==
        doctest::Approx(0.29874977506759633039).epsilon(1e-12));

  for (double t : {0.0, 0.03, 0.13, 0.4}) {
    double mb = kPi * (kER2 + 2.0 * t * kER + t * t);
    CHECK(empty_space_Fbar(t, p, ball) == doctest::Approx(std::exp(-25.0 * mb)).epsilon(1e-13));
    double ms = kPi * kER2 + 2.0 * t * kER;
    CHECK(empty_space_Fbar(t, p, seg) == doctest::Approx(std::exp(-25.0 * ms)).epsilon(1e-13));
    CHECK(empty_space_exponent(t, p, ball) == doctest::Approx(mb).epsilon(1e-13));
  }

  // monotone in t, complements consistent
  double prev = -1.0;
  for (double t = 0.0; t <= 1.0; t += 0.05) {
    double F = empty_space_F(t, p, ball);
    CHECK(F >= prev);
    CHECK(F + empty_space_Fbar(t, p, ball) == doctest::Approx(1.0).epsilon(1e-14));
    prev = F;
  }

  CHECK_THROWS_AS(empty_space_exponent(-0.1, p, ball), Error);
  CHECK_THROWS_AS(empty_space_F(0.1, p, GaugeBody::ball(3)), Error);
}

TEST_CASE("three dimensional ball gauge") {
  ModelParams p = model_u(5.0, 3);
  GaugeBody b3 = GaugeBody::ball(3);
  for (double t : {0.0, 0.1, 0.3}) {
    double m = (4.0 * kPi / 3.0) * (kER3 + 3.0 * t * kER2 + 3.0 * t * t * kER + t * t * t);
    CHECK(empty_space_Fbar(t, p, b3) == doctest::Approx(std::exp(-5.0 * m)).epsilon(1e-13));
  }
}

TEST_CASE("exponential decay bound") {
  ModelParams p = model_u(25.0);
  GaugeBody ball = GaugeBody::ball(2);
  GaugeBody seg = GaugeBody::segment2(0.0, 1.0);
  CHECK(decay_constant(p, ball) == doctest::Approx(2.9452431127404311611).epsilon(1e-13));
  CHECK(decay_constant(p, seg) == doctest::Approx(0.9375).epsilon(1e-15));
  for (double t = 0.0; t <= 3.0; t += 0.05) {
    CHECK(empty_space_Fbar(t, p, ball) <= std::exp(-4.0 * 2.9452431127404311611 * t) + 1e-15);
    CHECK(empty_space_Fbar(t, p, seg) <= std::exp(-4.0 * 0.9375 * t) + 1e-15);
  }
}

TEST_CASE("weighted mass of the survival function") {
  ModelParams p = model_u(25.0);
  GaugeBody ball = GaugeBody::ball(2);
  GaugeBody seg = GaugeBody::segment2(1.0, 0.0);
  WeightFunction f = WeightFunction::band(0.05);
  CHECK(beta_constant(f, p, ball) == doctest::Approx(0.45258705974945814369).epsilon(1e-9));
  CHECK(beta_constant(f, p, seg) == doctest::Approx(0.57669917217550730444).epsilon(1e-9));
  CHECK_THROWS_AS(
      beta_constant(WeightFunction::tabulated({{0.0, 0.0}, {0.1, 0.0}}), p, ball), Error);
}

TEST_CASE("survival horizon brackets the floor") {
  ModelParams p = model_u(25.0);
  for (const GaugeBody& B : {GaugeBody::ball(2), GaugeBody::segment2(1.0, 0.0)}) {
    double h = fbar_horizon(p, B, 1e-16);
    CHECK(empty_space_Fbar(h, p, B) <= 1e-16);
    CHECK(empty_space_Fbar(std::max(h - 0.01, 0.0), p, B) > 1e-16);
  }
}

TEST_CASE("mean lens volume against direct sampling") {
  Rng rng(555);
  const int n = 200000;
  for (const RadiusLaw& law : {RadiusLaw::uniform(0.05, 0.1), RadiusLaw::exponential(10.0)}) {
    ModelParams p;
    p.gamma = 25.0;
    p.radii = law;
    p.dim = 2;
    double dist = 0.08, t1 = 0.02, t2 = 0.05;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < n; ++i) {
      double r = law.sample(rng);
      double v = lens_volume(2, dist, t1 + r, t2 + r);
      sum += v;
      sum2 += v * v;
    }
    double mean = sum / n;
    double sd = std::sqrt(std::max(sum2 / n - mean * mean, 0.0) / n);
    double got = mean_lens_volume(dist, t1, t2, p);
    CHECK(std::abs(got - mean) < 4.0 * sd + 1e-12);
  }
}

TEST_CASE("two point survival") {
  ModelParams p = model_u(25.0);
  // coincident test points reduce to the one point law at the larger depth
  for (auto [t1, t2] : {std::pair{0.02, 0.07}, {0.1, 0.03}, {0.05, 0.05}}) {
    double v = second_order_Fbar2(0.0, t1, t2, p);
    CHECK(v == doctest::Approx(empty_space_Fbar(std::max(t1, t2), p, GaugeBody::ball(2)))
                   .epsilon(1e-10));
  }

  GaugeBody ball = GaugeBody::ball(2);
  Rng rng(888);
  double prev = kInf;
  for (int i = 0; i < 1000; ++i) {
    double dist = rng.uniform(0.0, 0.6);
    double t1 = rng.uniform(0.0, 0.3), t2 = rng.uniform(0.0, 0.3);
    double v = second_order_Fbar2(dist, t1, t2, p);
    double f1 = empty_space_Fbar(t1, p, ball), f2 = empty_space_Fbar(t2, p, ball);
    CHECK(v >= f1 * f2 * (1.0 - 1e-12));
    CHECK(v <= std::sqrt(f1 * f2) * (1.0 + 1e-12));
    double u[2] = {dist, 0.0};
    CHECK(second_order_Fbar2_vec(u, t1, t2, p, ball) == doctest::Approx(v).epsilon(1e-12));
  }
  // distance only weakens the dependence
  prev = second_order_Fbar2(0.0, 0.05, 0.08, p);
  for (double dist : {0.05, 0.1, 0.2, 0.4, 0.8}) {
    double v = second_order_Fbar2(dist, 0.05, 0.08, p);
    CHECK(v <= prev + 1e-14);
    prev = v;
  }
}
