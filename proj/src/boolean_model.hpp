#pragma once

#include <cstdint>
#include <vector>

#include "gauge.hpp"
#include "radius_law.hpp"

namespace sphstat {

struct ModelParams {
  double gamma = 1.0;  // germ intensity per unit volume
  RadiusLaw radii;
  int dim = 2;

  void validate() const;
};

// Axis-aligned box [lo_1, hi_1) x ... x [lo_d, hi_d).
struct Window {
  int dim = 2;
  double lo[3] = {0, 0, 0};
  double hi[3] = {0, 0, 0};

  static Window box2(double x0, double y0, double x1, double y1);
  static Window cube(int dim, double half);  // [-half, half)^dim

  double volume() const;
  Window dilated(double m) const;
  // Points whose eps-ball stays inside: shrink every side by eps.
  Window eroded_ball(double eps) const;
  // Points x with the whole segment x + [0, eps]*dir inside the box.
  Window eroded_segment(const double* dir, double eps) const;
  bool contains(const double* x) const;
  bool nonempty() const;
  // Euclidean distance from an inside point to the boundary.
  double boundary_distance(const double* x) const;
  // Parameter at which the ray x + t*dir leaves the box (x inside).
  double ray_exit(const double* x, const double* dir) const;
};

// Fixed sample of a Boolean model: germ centers with radii, drawn on a
// simulation window that extends `margin` beyond the observation window so
// that contact queries inside it are not censored.
struct Realization {
  int dim = 2;
  std::vector<double> centers;  // dim-strided
  std::vector<double> radii;
  Window window;      // observation window the sample was built for
  Window sim_window;  // window dilated by margin
  double margin = 0.0;
  ModelParams params;
  std::uint64_t seed = 0;

  std::size_t count() const { return radii.size(); }
  const double* center(std::size_t i) const { return centers.data() + std::size_t(dim) * i; }
};

// Largest radius the sampler must account for: exact for bounded laws, the
// 1 - 1e-8 quantile otherwise.
double radius_cap(const RadiusLaw& law);

// Margin that keeps contact queries with probe depth `probe` uncensored.
double auto_margin(const ModelParams& params, double probe);

Realization sample_realization(const ModelParams& params, const Window& window,
                               double margin, std::uint64_t seed);

// Uniform-cell spatial index over the germs of one realization. Cell lists
// contain every germ whose ball touches the cell, so a cell's box distance is
// a valid lower bound for the gauge distance to each unseen germ.
class GridIndex {
 public:
  GridIndex() = default;
  void build(const Realization& r, double cell_size);
  bool built() const { return cell_ > 0; }

  // Smallest ball-gauge distance over germs, stopping early past `bound`.
  // Ties pick the smallest germ id. Returns (dist, germ) with germ = -1 when
  // nothing lies within `bound`.
  void nearest_ball(const double* x, double bound, double* dist, std::int64_t* germ) const;
  // First ray hit along unit `dir` within parameter `bound`.
  void first_ray_hit(const double* x, const double* dir, double bound, double* param,
                     std::int64_t* germ) const;

  // Ring search minimizing fn(germ) over all germs, where fn must dominate
  // the plain ball-gauge distance (the pruning bound). +inf skips a germ.
  template <class Fn>
  void search_min(const double* x, double bound, Fn&& fn, double* dist,
                  std::int64_t* germ) const {
    const Realization& r = *r_;
    double best = kInfGrid();
    std::int64_t bestg = -1;
    auto consider = [&](std::int32_t g) {
      double d = fn(g);
      if (d > bound) return;
      if (d < best || (d == best && (bestg < 0 || g < bestg))) {
        best = d;
        bestg = g;
      }
    };
    bool in_grid = x[0] >= origin_[0] && x[1] >= origin_[1] &&
                   x[0] < origin_[0] + n_[0] * cell_ && x[1] < origin_[1] + n_[1] * cell_;
    if (!in_grid) {
      for (std::size_t g = 0; g < r.count(); ++g) consider(std::int32_t(g));
    } else {
      int ix0 = clamp_cell(int((x[0] - origin_[0]) / cell_), n_[0]);
      int iy0 = clamp_cell(int((x[1] - origin_[1]) / cell_), n_[1]);
      int kmax = std::max(n_[0], n_[1]);
      for (int k = 0; k <= kmax; ++k) {
        if (k >= 1 && (k - 1) * cell_ > (best < bound ? best : bound)) break;
        int xa = ix0 - k, xb = ix0 + k, ya = iy0 - k, yb = iy0 + k;
        int xlo = xa > 0 ? xa : 0, xhi = xb < n_[0] - 1 ? xb : n_[0] - 1;
        for (int ix = xlo; ix <= xhi; ++ix) {
          if (ya >= 0)
            for (std::int32_t g : lists_[cell_id(ix, ya)]) consider(g);
          if (yb < n_[1] && k > 0)
            for (std::int32_t g : lists_[cell_id(ix, yb)]) consider(g);
        }
        int ylo = ya + 1 > 0 ? ya + 1 : 0, yhi = yb - 1 < n_[1] - 1 ? yb - 1 : n_[1] - 1;
        for (int iy = ylo; iy <= yhi; ++iy) {
          if (xa >= 0)
            for (std::int32_t g : lists_[cell_id(xa, iy)]) consider(g);
          if (xb < n_[0] && k > 0)
            for (std::int32_t g : lists_[cell_id(xb, iy)]) consider(g);
        }
      }
    }
    *dist = bestg >= 0 ? best : kInfGrid();
    *germ = bestg;
  }

  const Realization& realization() const { return *r_; }

 private:
  const Realization* r_ = nullptr;
  double cell_ = 0.0;
  double origin_[3] = {0, 0, 0};
  int n_[3] = {0, 0, 0};
  std::vector<std::vector<std::int32_t>> lists_;

  static double kInfGrid();
  static int clamp_cell(int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); }
  std::size_t cell_id(int ix, int iy) const { return std::size_t(iy) * n_[0] + ix; }
};

struct ContactRecord {
  double distance = 0.0;  // gauge contact distance, 0 when x is covered, +inf on miss
  double radius = -1.0;   // radius of the germ realizing it
  std::int64_t germ = -1;
  bool found = false;  // false when the search was cut off before any hit
};

// Contact distance from x to the union of grains, searched up to `cutoff`.
// Throws when the query cannot be certified within the populated region
// (insufficient margin for this cutoff).
ContactRecord contact(const double* x, const Realization& r, const GridIndex& idx,
                      const GaugeBody& B, double cutoff);

// Reference implementation scanning every germ; no censoring checks.
ContactRecord contact_bruteforce(const double* x, const Realization& r, const GaugeBody& B);

}  // namespace sphstat
