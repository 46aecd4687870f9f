#include "boolean_model.hpp"

#include <algorithm>
#include <cmath>

#include "common.hpp"
#include "rng.hpp"

namespace sphstat {

void ModelParams::validate() const {
  if (!(gamma > 0)) throw Error(Errc::invalid_argument, "intensity gamma must be > 0");
  if (dim < 2 || dim > 3)
    throw Error(Errc::invalid_argument, "model dimension must be 2 or 3");
  radii.validate();
}

Window Window::box2(double x0, double y0, double x1, double y1) {
  Window w;
  w.dim = 2;
  w.lo[0] = x0;
  w.lo[1] = y0;
  w.hi[0] = x1;
  w.hi[1] = y1;
  if (!w.nonempty()) throw Error(Errc::invalid_argument, "window must have positive extent");
  return w;
}

Window Window::cube(int dim, double half) {
  if (dim < 1 || dim > 3) throw Error(Errc::invalid_argument, "window dimension must be 1..3");
  Window w;
  w.dim = dim;
  for (int i = 0; i < dim; ++i) {
    w.lo[i] = -half;
    w.hi[i] = half;
  }
  if (!w.nonempty()) throw Error(Errc::invalid_argument, "window must have positive extent");
  return w;
}

double Window::volume() const {
  double v = 1.0;
  for (int i = 0; i < dim; ++i) v *= hi[i] - lo[i];
  return v;
}

Window Window::dilated(double m) const {
  Window w = *this;
  for (int i = 0; i < dim; ++i) {
    w.lo[i] -= m;
    w.hi[i] += m;
  }
  return w;
}

Window Window::eroded_ball(double eps) const {
  return dilated(-eps);
}

Window Window::eroded_segment(const double* dir, double eps) const {
  Window w = *this;
  for (int i = 0; i < dim; ++i) {
    double shift = eps * dir[i];
    if (shift > 0)
      w.hi[i] -= shift;
    else
      w.lo[i] -= shift;
  }
  return w;
}

bool Window::contains(const double* x) const {
  for (int i = 0; i < dim; ++i)
    if (!(x[i] >= lo[i] && x[i] < hi[i])) return false;
  return true;
}

bool Window::nonempty() const {
  for (int i = 0; i < dim; ++i)
    if (!(hi[i] > lo[i])) return false;
  return true;
}

double Window::boundary_distance(const double* x) const {
  double d = kInf;
  for (int i = 0; i < dim; ++i) d = std::min(d, std::min(x[i] - lo[i], hi[i] - x[i]));
  return d;
}

double Window::ray_exit(const double* x, const double* dir) const {
  double t = kInf;
  for (int i = 0; i < dim; ++i) {
    if (dir[i] > 0)
      t = std::min(t, (hi[i] - x[i]) / dir[i]);
    else if (dir[i] < 0)
      t = std::min(t, (lo[i] - x[i]) / dir[i]);
  }
  return std::max(t, 0.0);
}

double radius_cap(const RadiusLaw& law) { return law.cap(1e-8); }

double auto_margin(const ModelParams& params, double probe) {
  return radius_cap(params.radii) + probe;
}

Realization sample_realization(const ModelParams& params, const Window& window,
                               double margin, std::uint64_t seed) {
  params.validate();
  if (!(margin >= 0)) throw Error(Errc::invalid_argument, "margin must be >= 0");
  if (window.dim != params.dim)
    throw Error(Errc::invalid_argument, "window dimension does not match model");
  Realization r;
  r.dim = params.dim;
  r.window = window;
  r.sim_window = window.dilated(margin);
  r.margin = margin;
  r.params = params;
  r.seed = seed;

  Rng rng(seed);
  std::uint64_t n = rng.poisson(params.gamma * r.sim_window.volume());
  r.centers.reserve(n * std::size_t(r.dim));
  r.radii.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    for (int k = 0; k < r.dim; ++k)
      r.centers.push_back(rng.uniform(r.sim_window.lo[k], r.sim_window.hi[k]));
    r.radii.push_back(params.radii.sample(rng));
  }
  return r;
}

void GridIndex::build(const Realization& r, double cell_size) {
  if (r.dim != 2) throw Error(Errc::unsupported, "grid index is planar only");
  r_ = &r;
  double rmax = 0.0;
  for (double rad : r.radii) rmax = std::max(rmax, rad);
  // Grid covers every ball entirely: leaving it certifies no further germs.
  double lo0 = r.sim_window.lo[0] - rmax, lo1 = r.sim_window.lo[1] - rmax;
  double hi0 = r.sim_window.hi[0] + rmax, hi1 = r.sim_window.hi[1] + rmax;
  if (cell_size <= 0) {
    double per_germ = (hi0 - lo0) * (hi1 - lo1) / double(std::max<std::size_t>(r.count(), 1));
    cell_size = std::max(std::sqrt(per_germ), 1e-3 * (hi0 - lo0));
  }
  cell_ = cell_size;
  origin_[0] = lo0;
  origin_[1] = lo1;
  n_[0] = std::max(1, int(std::ceil((hi0 - lo0) / cell_)));
  n_[1] = std::max(1, int(std::ceil((hi1 - lo1) / cell_)));
  lists_.assign(std::size_t(n_[0]) * n_[1], {});
  for (std::size_t g = 0; g < r.count(); ++g) {
    const double* c = r.center(g);
    double rad = r.radii[g];
    int x0 = std::clamp(int(std::floor((c[0] - rad - lo0) / cell_)), 0, n_[0] - 1);
    int x1 = std::clamp(int(std::floor((c[0] + rad - lo0) / cell_)), 0, n_[0] - 1);
    int y0 = std::clamp(int(std::floor((c[1] - rad - lo1) / cell_)), 0, n_[1] - 1);
    int y1 = std::clamp(int(std::floor((c[1] + rad - lo1) / cell_)), 0, n_[1] - 1);
    for (int iy = y0; iy <= y1; ++iy)
      for (int ix = x0; ix <= x1; ++ix) lists_[cell_id(ix, iy)].push_back(std::int32_t(g));
  }
}

double GridIndex::kInfGrid() { return kInf; }

void GridIndex::nearest_ball(const double* x, double bound, double* dist,
                             std::int64_t* germ) const {
  const Realization& r = *r_;
  search_min(
      x, bound,
      [&](std::int32_t g) {
        double dx = x[0] - r.centers[2 * std::size_t(g)];
        double dy = x[1] - r.centers[2 * std::size_t(g) + 1];
        double d = std::sqrt(dx * dx + dy * dy) - r.radii[std::size_t(g)];
        return d < 0 ? 0.0 : d;
      },
      dist, germ);
}

void GridIndex::first_ray_hit(const double* x, const double* dir, double bound,
                              double* param, std::int64_t* germ) const {
  const Realization& r = *r_;
  double best = kInf;
  std::int64_t bestg = -1;
  auto consider = [&](std::int32_t g) {
    double h = ray_ball_first_hit(x, dir, 2, r.center(std::size_t(g)), r.radii[std::size_t(g)]);
    if (h > bound) return;
    if (h < best || (h == best && (bestg < 0 || g < bestg))) {
      best = h;
      bestg = g;
    }
  };
  bool in_grid = x[0] >= origin_[0] && x[1] >= origin_[1] &&
                 x[0] < origin_[0] + n_[0] * cell_ && x[1] < origin_[1] + n_[1] * cell_;
  if (!in_grid) {
    for (std::size_t g = 0; g < r.count(); ++g) consider(std::int32_t(g));
  } else {
    int ix = int(std::floor((x[0] - origin_[0]) / cell_));
    int iy = int(std::floor((x[1] - origin_[1]) / cell_));
    int sx = dir[0] > 0 ? 1 : (dir[0] < 0 ? -1 : 0);
    int sy = dir[1] > 0 ? 1 : (dir[1] < 0 ? -1 : 0);
    double tmx = kInf, tmy = kInf, tdx = kInf, tdy = kInf;
    if (sx != 0) {
      tdx = cell_ / std::abs(dir[0]);
      double edge = origin_[0] + (ix + (sx > 0 ? 1 : 0)) * cell_;
      tmx = (edge - x[0]) / dir[0];
    }
    if (sy != 0) {
      tdy = cell_ / std::abs(dir[1]);
      double edge = origin_[1] + (iy + (sy > 0 ? 1 : 0)) * cell_;
      tmy = (edge - x[1]) / dir[1];
    }
    double t_enter = 0.0;
    while (true) {
      if (ix >= 0 && ix < n_[0] && iy >= 0 && iy < n_[1])
        for (std::int32_t g : lists_[cell_id(ix, iy)]) consider(g);
      else
        break;  // left the grid: no germ ball extends beyond it
      if (t_enter > std::min(best, bound)) break;
      if (tmx <= tmy) {
        t_enter = tmx;
        tmx += tdx;
        ix += sx;
      } else {
        t_enter = tmy;
        tmy += tdy;
        iy += sy;
      }
      if (t_enter > std::min(best, bound)) break;
    }
  }
  *param = bestg >= 0 ? best : kInf;
  *germ = bestg;
}

namespace {

// Largest probe depth certifiable from x given the populated sim window.
double certified_depth(const double* x, const Realization& r, const GaugeBody& B) {
  double rcap = radius_cap(r.params.radii);
  if (B.kind == GaugeKind::UnitBall) {
    return r.sim_window.boundary_distance(x) - rcap;
  }
  Window safe = r.sim_window.eroded_ball(rcap);
  if (!safe.nonempty() || !safe.contains(x)) return 0.0;
  return safe.ray_exit(x, B.dir);
}

ContactRecord finalize(const Realization& r, double d, std::int64_t g, double cutoff,
                       double cert) {
  ContactRecord rec;
  if (g >= 0) {
    rec.distance = d;
    rec.radius = r.radii[std::size_t(g)];
    rec.germ = g;
    rec.found = true;
    return rec;
  }
  if (cutoff <= cert) {
    rec.distance = kInf;
    rec.found = false;
    return rec;
  }
  throw Error(Errc::insufficient_margin,
              "contact query cannot be certified within the simulated region; "
              "increase the sampling margin or lower the cutoff");
}

}  // namespace

ContactRecord contact(const double* x, const Realization& r, const GridIndex& idx,
                      const GaugeBody& B, double cutoff) {
  if (B.dim != r.dim) throw Error(Errc::invalid_argument, "gauge dimension mismatch");
  if (!(cutoff >= 0)) cutoff = kInf;
  double cert = certified_depth(x, r, B);
  // Hits found within min(cutoff, cert) are final; witnessed coverage (d = 0)
  // needs no certification, hence the clamp.
  double bound = std::min(cutoff, std::max(cert, 0.0));
  double d;
  std::int64_t g;
  if (r.dim == 2 && idx.built()) {
    if (B.kind == GaugeKind::UnitBall)
      idx.nearest_ball(x, bound, &d, &g);
    else
      idx.first_ray_hit(x, B.dir, bound, &d, &g);
  } else {
    ContactRecord all = contact_bruteforce(x, r, B);
    d = all.distance;
    g = all.germ;
    if (d > bound) {
      d = kInf;
      g = -1;
    }
  }
  return finalize(r, d, g, cutoff, cert);
}

ContactRecord contact_bruteforce(const double* x, const Realization& r, const GaugeBody& B) {
  ContactRecord rec;
  double best = kInf;
  std::int64_t bestg = -1;
  for (std::size_t g = 0; g < r.count(); ++g) {
    double d = gauge_distance_to_ball(x, r.center(g), r.radii[g], B);
    if (d < best || (d == best && bestg >= 0 && std::int64_t(g) < bestg)) {
      best = d;
      bestg = std::int64_t(g);
    }
  }
  if (bestg >= 0 && best < kInf) {
    rec.distance = best;
    rec.radius = r.radii[std::size_t(bestg)];
    rec.germ = bestg;
    rec.found = true;
  } else {
    rec.distance = kInf;
    rec.found = false;
  }
  return rec;
}

}  // namespace sphstat
