#include "intervals.hpp"

#include <algorithm>
#include <cmath>

#include "common.hpp"

namespace sphstat {

double norm_angle(double theta) {
  double t = std::fmod(theta, kTau);
  if (t < 0) t += kTau;
  if (t >= kTau) t = 0.0;  // fmod rounding can land exactly on kTau
  return t;
}

AngleSet AngleSet::full() {
  AngleSet s;
  s.parts_.emplace_back(0.0, kTau);
  return s;
}

AngleSet AngleSet::arc(double center, double half_width) {
  if (half_width <= 0) return none();
  if (half_width >= kPi) return full();
  double lo = norm_angle(center - half_width);
  double width = 2.0 * half_width;
  AngleSet s;
  if (lo + width <= kTau) {
    s.parts_.emplace_back(lo, lo + width);
  } else {
    // keep pieces sorted: complement and intersect sweep in order
    s.parts_.emplace_back(0.0, lo + width - kTau);
    s.parts_.emplace_back(lo, kTau);
  }
  return s;
}

AngleSet AngleSet::union_of(const std::vector<std::pair<double, double>>& raw) {
  std::vector<std::pair<double, double>> segs;
  segs.reserve(raw.size() + 2);
  for (const auto& [a, b] : raw) {
    if (!(b > a)) continue;
    if (b - a >= kTau) return full();
    double lo = norm_angle(a);
    double hi = lo + (b - a);
    if (hi <= kTau) {
      segs.emplace_back(lo, hi);
    } else {
      segs.emplace_back(lo, kTau);
      segs.emplace_back(0.0, hi - kTau);
    }
  }
  if (segs.empty()) return none();
  std::sort(segs.begin(), segs.end());
  AngleSet out;
  double cur_a = segs[0].first, cur_b = segs[0].second;
  for (size_t i = 1; i < segs.size(); ++i) {
    if (segs[i].first <= cur_b) {
      cur_b = std::max(cur_b, segs[i].second);
    } else {
      out.parts_.emplace_back(cur_a, cur_b);
      cur_a = segs[i].first;
      cur_b = segs[i].second;
    }
  }
  out.parts_.emplace_back(cur_a, cur_b);
  return out;
}

double AngleSet::length() const {
  double s = 0.0;
  for (const auto& [a, b] : parts_) s += b - a;
  return s;
}

bool AngleSet::contains(double theta) const {
  double t = norm_angle(theta);
  for (const auto& [a, b] : parts_)
    if (t >= a && t < b) return true;
  return false;
}

AngleSet AngleSet::complement() const {
  AngleSet out;
  double cursor = 0.0;
  for (const auto& [a, b] : parts_) {
    if (a > cursor) out.parts_.emplace_back(cursor, a);
    cursor = b;
  }
  if (cursor < kTau) out.parts_.emplace_back(cursor, kTau);
  return out;
}

AngleSet AngleSet::intersect(const AngleSet& other) const {
  AngleSet out;
  size_t i = 0, j = 0;
  while (i < parts_.size() && j < other.parts_.size()) {
    double lo = std::max(parts_[i].first, other.parts_[j].first);
    double hi = std::min(parts_[i].second, other.parts_[j].second);
    if (hi > lo) out.parts_.emplace_back(lo, hi);
    if (parts_[i].second < other.parts_[j].second)
      ++i;
    else
      ++j;
  }
  return out;
}

}  // namespace sphstat
