#include "measure.hpp"

#include <algorithm>
#include <cmath>

#include "common.hpp"

namespace sphstat {

RadiusSet RadiusSet::all() {
  RadiusSet s;
  s.parts.push_back({0.0, kInf, true, true});
  return s;
}

RadiusSet RadiusSet::interval(double lo, double hi) {
  if (!(lo >= 0) || !(hi >= lo))
    throw Error(Errc::invalid_argument, "radius interval needs 0 <= lo <= hi");
  RadiusSet s;
  s.parts.push_back({lo, hi, true, true});
  return s;
}

bool RadiusSet::is_all() const {
  return parts.size() == 1 && parts[0].lo == 0.0 && parts[0].lo_closed &&
         parts[0].hi == kInf;
}

bool RadiusSet::contains(double r) const {
  for (const Piece& p : parts) {
    if (r < p.lo || (r == p.lo && !p.lo_closed)) continue;
    if (r > p.hi || (r == p.hi && !p.hi_closed)) continue;
    return true;
  }
  return false;
}

RadiusSet RadiusSet::complement() const {
  RadiusSet out;
  double cursor = 0.0;
  bool cursor_closed = true;  // cursor itself still available
  for (const Piece& p : parts) {
    if (p.lo > cursor || (p.lo == cursor && cursor_closed && !p.lo_closed)) {
      out.parts.push_back({cursor, p.lo, cursor_closed, !p.lo_closed});
    }
    cursor = p.hi;
    cursor_closed = !p.hi_closed;
    if (cursor == kInf) return out;
  }
  out.parts.push_back({cursor, kInf, cursor_closed, true});
  return out;
}

double RadiusSet::law_mass(const RadiusLaw& law) const {
  auto atom = [&](double x) {
    return law.kind == RadiusKind::Deterministic && x == law.r0 ? 1.0 : 0.0;
  };
  double m = 0.0;
  for (const Piece& p : parts) {
    double hi_cdf = p.hi == kInf ? 1.0 : law.cdf(p.hi);
    m += hi_cdf - law.cdf(p.lo);
    if (p.lo_closed) m += atom(p.lo);
    if (!p.hi_closed && p.hi != kInf) m -= atom(p.hi);
  }
  return std::clamp(m, 0.0, 1.0);
}

double WeightedRadiusMeasure::mass(const RadiusSet& c) const {
  double m = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i)
    if (c.contains(radii[i])) m += weights[i];
  return m;
}

WeightedRadiusMeasure MeasureBuilder::finish() const {
  WeightedRadiusMeasure m;
  m.radii.reserve(atoms.size());
  m.weights.reserve(atoms.size());
  for (const auto& [r, w] : atoms) {
    if (w == 0.0) continue;
    m.radii.push_back(r);
    m.weights.push_back(w);
    m.total += w;
  }
  return m;
}

double estimate_ratio(const WeightedRadiusMeasure& m, const RadiusSet& c) {
  if (!m.normalizable()) return std::nan("");
  return m.mass(c) / m.total;
}

double StepCdf::at(double t) const {
  auto it = std::upper_bound(s.begin(), s.end(), t);
  if (it == s.begin()) return 0.0;
  return v[std::size_t(it - s.begin()) - 1];
}

double StepCdf::left_at(double t) const {
  auto it = std::lower_bound(s.begin(), s.end(), t);
  if (it == s.begin()) return 0.0;
  return v[std::size_t(it - s.begin()) - 1];
}

StepCdf StepCdf::from_measure(const WeightedRadiusMeasure& m) {
  StepCdf c;
  if (!m.normalizable()) return c;
  c.s = m.radii;
  c.v.resize(m.weights.size());
  double run = 0.0;
  for (std::size_t i = 0; i < m.weights.size(); ++i) {
    run += m.weights[i];
    c.v[i] = run / m.total;
  }
  if (!c.v.empty()) c.v.back() = 1.0;  // kill accumulated rounding at the top
  return c;
}

StepCdf StepCdf::average(const std::vector<StepCdf>& parts) {
  std::vector<const StepCdf*> live;
  for (const StepCdf& p : parts)
    if (p.valid()) live.push_back(&p);
  StepCdf out;
  if (live.empty()) return out;
  std::vector<double> grid;
  for (const StepCdf* p : live) grid.insert(grid.end(), p->s.begin(), p->s.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  out.s = std::move(grid);
  out.v.resize(out.s.size());
  for (std::size_t i = 0; i < out.s.size(); ++i) {
    double acc = 0.0;
    for (const StepCdf* p : live) acc += p->at(out.s[i]);
    out.v[i] = acc / double(live.size());
  }
  return out;
}

}  // namespace sphstat
