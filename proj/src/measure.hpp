#pragma once

#include <map>
#include <utility>
#include <vector>

#include "radius_law.hpp"

namespace sphstat {

// Union of disjoint radius intervals within [0, inf), with explicit endpoint
// closedness so complements stay exact in the presence of atoms.
struct RadiusSet {
  struct Piece {
    double lo = 0, hi = 0;
    bool lo_closed = true, hi_closed = true;
  };
  std::vector<Piece> parts;  // sorted, disjoint

  static RadiusSet all();
  static RadiusSet interval(double lo, double hi);  // closed [lo, hi]
  bool is_all() const;
  bool contains(double r) const;
  RadiusSet complement() const;  // within [0, inf)
  // Mass under the radius law, atoms respected.
  double law_mass(const RadiusLaw& law) const;
};

// Finite weighted atom measure on radii: the discretized contact measure.
struct WeightedRadiusMeasure {
  std::vector<double> radii;    // sorted, unique
  std::vector<double> weights;  // > 0 entries only
  double total = 0.0;

  std::size_t size() const { return radii.size(); }
  double mass(const RadiusSet& c) const;
  bool normalizable() const { return total > 0.0; }
};

// Accumulates (radius, weight) contributions; duplicates merge.
struct MeasureBuilder {
  std::map<double, double> atoms;
  void add(double r, double w) {
    if (w != 0.0) atoms[r] += w;
  }
  WeightedRadiusMeasure finish() const;
};

// Ratio-of-mass estimate of G(C); NaN when the measure is null (0/0).
double estimate_ratio(const WeightedRadiusMeasure& m, const RadiusSet& c);

// Right-continuous step function with values in [0,1]; an estimate of a
// distribution function.
struct StepCdf {
  std::vector<double> s;  // jump locations, sorted
  std::vector<double> v;  // value on [s[i], s[i+1])

  bool valid() const { return !s.empty(); }
  double at(double t) const;
  double left_at(double t) const;
  static StepCdf from_measure(const WeightedRadiusMeasure& m);  // null measure -> invalid
  static StepCdf average(const std::vector<StepCdf>& parts);    // skips invalid entries
};

}  // namespace sphstat
