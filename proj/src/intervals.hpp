#pragma once

#include <utility>
#include <vector>

namespace sphstat {

// Measurable union of angular intervals on the circle [0, 2*pi), kept as
// disjoint sorted pieces [a, b) with 0 <= a < b <= 2*pi. Endpoint topology is
// irrelevant; only lengths matter downstream.
class AngleSet {
 public:
  static AngleSet none() { return AngleSet{}; }
  static AngleSet full();
  // Arc of given half-width around `center`; wraps across 0. A half-width of
  // pi or more gives the full circle, a nonpositive one the empty set.
  static AngleSet arc(double center, double half_width);
  // Union of raw (start, end) arcs in unnormalized angles, end >= start.
  static AngleSet union_of(const std::vector<std::pair<double, double>>& raw);

  double length() const;
  bool empty() const { return parts_.empty(); }
  bool contains(double theta) const;

  AngleSet complement() const;
  AngleSet intersect(const AngleSet& other) const;

  const std::vector<std::pair<double, double>>& parts() const { return parts_; }

 private:
  std::vector<std::pair<double, double>> parts_;
};

// Angle normalized into [0, 2*pi).
double norm_angle(double theta);

}  // namespace sphstat
