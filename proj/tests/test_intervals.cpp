#include <cmath>
#include <vector>

#include "common.hpp"
#include "doctest.h"
#include "intervals.hpp"
#include "rng.hpp"

using namespace sphstat;

TEST_CASE("angle normalization") {
  CHECK(norm_angle(0.0) == 0.0);
  CHECK(norm_angle(kTau + 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(norm_angle(-0.5) == doctest::Approx(kTau - 0.5).epsilon(1e-12));
}

TEST_CASE("basic angle sets") {
  CHECK(AngleSet::none().empty());
  CHECK(AngleSet::full().length() == doctest::Approx(kTau).epsilon(1e-15));
  CHECK(AngleSet::arc(1.0, 0.25).length() == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(AngleSet::arc(1.0, kPi).length() == doctest::Approx(kTau).epsilon(1e-13));
  CHECK(AngleSet::arc(1.0, -0.1).empty());

  AngleSet wrap = AngleSet::arc(0.1, 0.5);  // covers [-0.4, 0.6] across zero
  CHECK(wrap.contains(0.0));
  CHECK(wrap.contains(kTau - 0.3));
  CHECK(!wrap.contains(1.0));
  CHECK(wrap.length() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("union merges overlapping raw arcs") {
  AngleSet u = AngleSet::union_of({{0.0, 1.0}, {0.5, 2.0}, {3.0, 4.0}});
  CHECK(u.length() == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(u.parts().size() == 2);
  // raw arcs may exceed one turn; the union is then everything
  CHECK(AngleSet::union_of({{1.0, 1.0 + kTau}}).length() == doctest::Approx(kTau).epsilon(1e-13));
}

TEST_CASE("complement and intersection behave like set operations") {
  AngleSet a = AngleSet::union_of({{0.2, 0.9}, {2.0, 2.5}});
  CHECK(a.complement().length() == doctest::Approx(kTau - a.length()).epsilon(1e-12));
  CHECK(a.intersect(a.complement()).empty());
  CHECK(a.intersect(AngleSet::full()).length() == doctest::Approx(a.length()).epsilon(1e-12));

  AngleSet b = AngleSet::arc(0.9, 0.4);
  AngleSet both = a.intersect(b);
  double sum = both.length() + a.intersect(b.complement()).length();
  CHECK(sum == doctest::Approx(a.length()).epsilon(1e-12));

  // a wrapped arc must keep its pieces sorted or the sweeps above break
  AngleSet w = AngleSet::arc(0.0, 2.0);
  REQUIRE(w.parts().size() == 2);
  CHECK(w.parts().front().first == 0.0);
  CHECK(w.intersect(AngleSet::full()).length() == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(w.complement().length() == doctest::Approx(kTau - 4.0).epsilon(1e-12));
  CHECK(w.intersect(w.complement()).empty());
}

TEST_CASE("set operations agree with the pointwise predicate") {
  Rng rng(77);
  std::vector<std::pair<double, double>> raw_a, raw_b;
  for (int i = 0; i < 5; ++i) {
    double s = rng.uniform(0.0, kTau), w = rng.uniform(0.0, 2.0);
    raw_a.push_back({s, s + w});
    s = rng.uniform(0.0, kTau);
    w = rng.uniform(0.0, 2.0);
    raw_b.push_back({s, s + w});
  }
  AngleSet A = AngleSet::union_of(raw_a);
  AngleSet B = AngleSet::union_of(raw_b);
  AngleSet I = A.intersect(B);
  AngleSet Ac = A.complement();
  auto in_raw = [](const std::vector<std::pair<double, double>>& raw, double th) {
    for (const auto& [s, e] : raw) {
      // membership modulo a full turn
      double d = norm_angle(th - s);
      if (d <= e - s) return true;
    }
    return false;
  };
  for (int i = 0; i < 100000; ++i) {
    double th = rng.uniform(0.0, kTau);
    bool a = in_raw(raw_a, th);
    CHECK(A.contains(th) == a);
    CHECK(Ac.contains(th) == !a);
    CHECK(I.contains(th) == (a && in_raw(raw_b, th)));
  }
}
