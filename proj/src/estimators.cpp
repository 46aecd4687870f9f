#include "estimators.hpp"

#include <algorithm>
#include <cmath>

#include "common.hpp"

namespace sphstat {

Method parse_method(const std::string& name) {
  if (name == "weighted") return Method::Weighted;
  if (name == "minus") return Method::WeightedMinus;
  if (name == "uncorrected") return Method::Uncorrected;
  if (name == "hanisch") return Method::Hanisch;
  throw Error(Errc::invalid_argument, "unknown estimator method: " + name);
}

std::string method_name(Method m) {
  switch (m) {
    case Method::Weighted: return "weighted";
    case Method::WeightedMinus: return "minus";
    case Method::Uncorrected: return "uncorrected";
    case Method::Hanisch: return "hanisch";
  }
  return "?";
}

double required_margin(const EstimatorConfig& cfg, const ModelParams& params) {
  double rcap = radius_cap(params.radii);
  switch (cfg.method) {
    case Method::Weighted:
    case Method::WeightedMinus:
      return rcap + cfg.f.support_hi();
    case Method::Uncorrected:
    case Method::Hanisch:
      // only grains meeting W matter; contact depth is capped by the
      // in-window boundary distance
      return rcap;
  }
  return rcap;
}

LatticeRange lattice_over(const Window& W, double h) {
  LatticeRange g;
  g.h = h;
  g.k0 = long(std::ceil(W.lo[0] / h + 0.5));
  g.k1 = long(std::ceil(W.hi[0] / h + 0.5)) - 1;
  g.l0 = long(std::ceil(W.lo[1] / h + 0.5));
  g.l1 = long(std::ceil(W.hi[1] / h + 0.5)) - 1;
  return g;
}

namespace {

double point_segment_distance(double px, double py, double ax, double ay, double bx,
                              double by) {
  double vx = bx - ax, vy = by - ay;
  double L2 = vx * vx + vy * vy;
  double t = L2 > 0 ? ((px - ax) * vx + (py - ay) * vy) / L2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  double dx = px - (ax + t * vx), dy = py - (ay + t * vy);
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

bool ball_meets_box(const double* c, double radius, const Window& W) {
  double d2 = 0.0;
  for (int i = 0; i < W.dim; ++i) {
    double v = std::clamp(c[i], W.lo[i], W.hi[i]) - c[i];
    d2 += v * v;
  }
  return d2 <= radius * radius;
}

double clipped_ball_distance(const double* x, const double* c, double radius,
                             const Window& W) {
  double dx = x[0] - c[0], dy = x[1] - c[1];
  double n = std::sqrt(dx * dx + dy * dy);
  if (n <= radius) return 0.0;  // x itself lies in the grain (and in W)
  double foot[2] = {c[0] + dx * (radius / n), c[1] + dy * (radius / n)};
  if (foot[0] >= W.lo[0] && foot[0] <= W.hi[0] && foot[1] >= W.lo[1] && foot[1] <= W.hi[1])
    return n - radius;
  // nearest point sits on the window boundary: check each edge's chord
  double best = kInf;
  auto edge_x = [&](double y0) {
    double s2 = radius * radius - (y0 - c[1]) * (y0 - c[1]);
    if (s2 < 0) return;
    double s = std::sqrt(s2);
    double exlo = std::max(c[0] - s, W.lo[0]);
    double exhi = std::min(c[0] + s, W.hi[0]);
    if (exlo > exhi) return;
    best = std::min(best, point_segment_distance(x[0], x[1], exlo, y0, exhi, y0));
  };
  auto edge_y = [&](double x0) {
    double s2 = radius * radius - (x0 - c[0]) * (x0 - c[0]);
    if (s2 < 0) return;
    double s = std::sqrt(s2);
    double eylo = std::max(c[1] - s, W.lo[1]);
    double eyhi = std::min(c[1] + s, W.hi[1]);
    if (eylo > eyhi) return;
    best = std::min(best, point_segment_distance(x[0], x[1], x0, eylo, x0, eyhi));
  };
  edge_x(W.lo[1]);
  edge_x(W.hi[1]);
  edge_y(W.lo[0]);
  edge_y(W.hi[0]);
  return best;
}

WeightedRadiusMeasure eta_measure(const Realization& r, const GridIndex& idx, const Window& W,
                                  const GaugeBody& gauge, const WeightFunction& f,
                                  double grid_h) {
  EstimatorConfig cfg;
  cfg.method = Method::Weighted;
  cfg.gauge = gauge;
  cfg.f = f;
  cfg.grid_h = grid_h;
  return estimate_edge_corrected(r, idx, W, cfg);
}

WeightedRadiusMeasure estimate_edge_corrected(const Realization& r, const GridIndex& idx,
                                              const Window& W, const EstimatorConfig& cfg) {
  if (r.dim != 2) throw Error(Errc::unsupported, "grid estimators are planar only");
  if (!(cfg.grid_h > 0)) throw Error(Errc::invalid_argument, "grid step must be positive");
  cfg.f.validate();
  if (r.margin + 1e-12 < required_margin(cfg, r.params))
    throw Error(Errc::insufficient_margin,
                "realization margin too small for this estimator configuration");

  Window PW = W;  // window the lattice points must lie in
  if (cfg.method == Method::WeightedMinus) {
    PW = cfg.gauge.kind == GaugeKind::UnitBall
             ? W.eroded_ball(cfg.minus_eps)
             : W.eroded_segment(cfg.gauge.dir, cfg.minus_eps);
    if (!PW.nonempty())
      throw Error(Errc::invalid_argument, "eroded window is empty; reduce the erosion depth");
  }

  const double f_sup = cfg.f.support_hi();
  const double area = cfg.grid_h * cfg.grid_h;
  const HDensity hd(cfg.gauge);
  const bool segment = cfg.gauge.kind == GaugeKind::Segment;

  // Grains meeting W, for the restricted-process method.
  std::vector<char> meets;
  if (cfg.method == Method::Uncorrected && !segment) {
    meets.resize(r.count());
    for (std::size_t g = 0; g < r.count(); ++g)
      meets[g] = ball_meets_box(r.center(g), r.radii[g], W) ? 1 : 0;
  }

  LatticeRange lat = lattice_over(PW, cfg.grid_h);
  MeasureBuilder builder;
  std::vector<std::pair<double, double>> row;
  for (long l = lat.l0; l <= lat.l1; ++l) {
    row.clear();
    double y = (double(l) - 0.5) * cfg.grid_h;
    for (long k = lat.k0; k <= lat.k1; ++k) {
      double x[2] = {(double(k) - 0.5) * cfg.grid_h, y};
      if (!PW.contains(x)) continue;  // lattice rounding guard
      double dist = kInf, radius = -1.0;
      std::int64_t germ = -1;
      switch (cfg.method) {
        case Method::Weighted:
        case Method::WeightedMinus: {
          ContactRecord rec = contact(x, r, idx, cfg.gauge, f_sup);
          if (rec.found) {
            dist = rec.distance;
            radius = rec.radius;
            germ = rec.germ;
          }
          break;
        }
        case Method::Hanisch: {
          // keep the contact only when it is closer than the window boundary
          double bd = segment ? W.ray_exit(x, cfg.gauge.dir) : W.boundary_distance(x);
          ContactRecord rec = contact(x, r, idx, cfg.gauge, std::min(f_sup, bd));
          if (rec.found && rec.distance <= bd) {
            dist = rec.distance;
            radius = rec.radius;
            germ = rec.germ;
          }
          break;
        }
        case Method::Uncorrected: {
          if (segment) {
            // the in-window part of the ray is [0, t_exit]; grazing the exit
            // boundary is a null event, kept closed
            double t_exit = W.ray_exit(x, cfg.gauge.dir);
            ContactRecord rec = contact(x, r, idx, cfg.gauge, std::min(f_sup, t_exit));
            if (rec.found && rec.distance <= t_exit) {
              dist = rec.distance;
              radius = rec.radius;
              germ = rec.germ;
            }
          } else {
            std::int64_t g = -1;
            double d = kInf;
            idx.search_min(
                x, f_sup,
                [&](std::int32_t gi) {
                  if (!meets[std::size_t(gi)]) return kInf;
                  return clipped_ball_distance(x, r.center(std::size_t(gi)),
                                               r.radii[std::size_t(gi)], W);
                },
                &d, &g);
            if (g >= 0) {
              dist = d;
              radius = r.radii[std::size_t(g)];
              germ = g;
            }
          }
          break;
        }
      }
      if (germ < 0 || !(dist > 0.0)) continue;
      double fv = cfg.f(dist);
      if (fv <= 0.0) continue;
      double h = hd(dist, radius);
      if (!(h > 0.0)) continue;  // zero-radius grain under the segment gauge: null event
      row.emplace_back(radius, fv / h * area);
    }
    for (const auto& [rad, w] : row) builder.add(rad, w);
  }
  return builder.finish();
}

}  // namespace sphstat
