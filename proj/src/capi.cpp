#include "spherestats.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "arc_estimators.hpp"
#include "boolean_model.hpp"
#include "common.hpp"
#include "csvio.hpp"
#include "distances.hpp"
#include "empty_space.hpp"
#include "estimators.hpp"
#include "experiment.hpp"
#include "measure.hpp"
#include "variance.hpp"

using namespace sphstat;

extern "C" {
struct sphs_model {
  ModelParams p;
};

struct sphs_realization {
  Realization r;
  GridIndex idx;
};

struct sphs_measure {
  WeightedRadiusMeasure m;
  StepCdf cdf;
};
}

namespace {

thread_local std::string t_last_error;

sphs_status map_error(const Error& e) {
  t_last_error = e.what();
  switch (e.code) {
    case Errc::invalid_argument: return SPHS_E_INVALID;
    case Errc::unsupported: return SPHS_E_UNSUPPORTED;
    case Errc::numeric_failure: return SPHS_E_NUMERIC;
    case Errc::io_failure: return SPHS_E_IO;
    case Errc::insufficient_margin: return SPHS_E_MARGIN;
    case Errc::validation_failed: return SPHS_E_VALIDATION;
  }
  return SPHS_E_INTERNAL;
}

template <class F>
sphs_status guarded(F&& f) {
  try {
    f();
    return SPHS_OK;
  } catch (const Error& e) {
    return map_error(e);
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return SPHS_E_INTERNAL;
  } catch (...) {
    t_last_error = "unknown failure";
    return SPHS_E_INTERNAL;
  }
}

sphs_status invalid(const char* msg) {
  t_last_error = msg;
  return SPHS_E_INVALID;
}

GaugeBody parse_gauge(const char* spec, int dim) {
  std::string s = spec ? spec : "";
  if (s == "ball") return GaugeBody::ball(dim);
  if (dim == 2) {
    if (s == "segment:+x") return GaugeBody::segment2(1.0, 0.0);
    if (s == "segment:-x") return GaugeBody::segment2(-1.0, 0.0);
    if (s == "segment:+y") return GaugeBody::segment2(0.0, 1.0);
    if (s == "segment:-y") return GaugeBody::segment2(0.0, -1.0);
  }
  throw Error(Errc::invalid_argument, "unknown gauge spec: " + s);
}

WeightFunction parse_weight(const char* spec) {
  std::string s = spec ? spec : "";
  if (s.rfind("band:", 0) == 0) return WeightFunction::band(parse_double(s.substr(5)));
  throw Error(Errc::invalid_argument, "unknown weight spec (expected \"band:eps\"): " + s);
}

sphs_measure* wrap_measure(WeightedRadiusMeasure m) {
  auto* out = new sphs_measure;
  out->m = std::move(m);
  out->cdf = StepCdf::from_measure(out->m);
  return out;
}

void write_text_file(const char* path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw Error(Errc::io_failure, std::string("cannot open ") + path + " for writing");
  os << text;
  if (!os) throw Error(Errc::io_failure, std::string("failed writing ") + path);
}

}  // namespace

extern "C" {

const char* sphs_version(void) { return kVersion; }

const char* sphs_last_error(void) { return t_last_error.c_str(); }

sphs_status sphs_model_new(double gamma, const char* radius_spec, int dim, sphs_model** out) {
  if (!out || !radius_spec) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    ModelParams p;
    p.gamma = gamma;
    p.radii = RadiusLaw::parse(radius_spec);
    p.dim = dim;
    p.validate();
    *out = new sphs_model{p};
  });
}

void sphs_model_free(sphs_model* m) { delete m; }

sphs_status sphs_model_radius_moment(const sphs_model* m, int k, double* out) {
  if (!m || !out) return invalid("null argument");
  return guarded([&] {
    if (k < 0) throw Error(Errc::invalid_argument, "moment order must be nonnegative");
    *out = m->p.radii.moment(k);
  });
}

sphs_status sphs_empty_space_F(const sphs_model* m, const char* gauge_spec, double t,
                               double* out) {
  if (!m || !out) return invalid("null argument");
  return guarded([&] { *out = empty_space_F(t, m->p, parse_gauge(gauge_spec, m->p.dim)); });
}

sphs_status sphs_decay_constant(const sphs_model* m, const char* gauge_spec, double* out) {
  if (!m || !out) return invalid("null argument");
  return guarded([&] { *out = decay_constant(m->p, parse_gauge(gauge_spec, m->p.dim)); });
}

sphs_status sphs_beta_constant(const sphs_model* m, const char* gauge_spec,
                               const char* weight_spec, double* out) {
  if (!m || !out) return invalid("null argument");
  return guarded([&] {
    *out = beta_constant(parse_weight(weight_spec), m->p, parse_gauge(gauge_spec, m->p.dim));
  });
}

sphs_status sphs_second_order_survival(const sphs_model* m, double dist, double t1, double t2,
                                       double* out) {
  if (!m || !out) return invalid("null argument");
  return guarded([&] { *out = second_order_Fbar2(dist, t1, t2, m->p); });
}

sphs_status sphs_simulate(const sphs_model* m, const double* win_lo, const double* win_hi,
                          double margin, double probe_depth, uint64_t seed,
                          sphs_realization** out) {
  if (!m || !win_lo || !win_hi || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    Window w;
    w.dim = m->p.dim;
    for (int i = 0; i < m->p.dim; ++i) {
      w.lo[i] = win_lo[i];
      w.hi[i] = win_hi[i];
    }
    if (!w.nonempty()) throw Error(Errc::invalid_argument, "window is empty");
    double mg = margin < 0 ? auto_margin(m->p, probe_depth) : margin;
    auto* r = new sphs_realization;
    try {
      r->r = sample_realization(m->p, w, mg, seed);
      r->idx.build(r->r, 0.0);
    } catch (...) {
      delete r;
      throw;
    }
    *out = r;
  });
}

void sphs_realization_free(sphs_realization* r) { delete r; }

sphs_status sphs_realization_count(const sphs_realization* r, size_t* out) {
  if (!r || !out) return invalid("null argument");
  *out = r->r.count();
  return SPHS_OK;
}

sphs_status sphs_realization_save_csv(const sphs_realization* r, const char* path) {
  if (!r || !path) return invalid("null argument");
  return guarded([&] { save_realization_csv(r->r, path); });
}

sphs_status sphs_realization_load_csv(const char* path, sphs_realization** out) {
  if (!path || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    auto* r = new sphs_realization;
    try {
      r->r = load_realization_csv(path);
      r->idx.build(r->r, 0.0);
    } catch (...) {
      delete r;
      throw;
    }
    *out = r;
  });
}

sphs_status sphs_contact(const sphs_realization* r, const char* gauge_spec, const double* x,
                         double cutoff, double* distance, double* grain_radius, int64_t* germ) {
  if (!r || !x || !distance) return invalid("null argument");
  return guarded([&] {
    GaugeBody B = parse_gauge(gauge_spec, r->r.dim);
    double cut = cutoff < 0 ? kInf : cutoff;
    ContactRecord rec = contact(x, r->r, r->idx, B, cut);
    *distance = rec.found ? rec.distance : kInf;
    if (grain_radius) *grain_radius = rec.found ? rec.radius : -1.0;
    if (germ) *germ = rec.found ? rec.germ : -1;
  });
}

sphs_status sphs_estimate(const sphs_realization* r, const char* method, const char* gauge_spec,
                          double epsilon, double minus_eps, double grid_h, sphs_measure** out) {
  if (!r || !method || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    std::string ms = method;
    const Window& W = r->r.window;
    if (ms == "limit-spherical") {
      ArcDecomposition arcs = visible_arcs(r->r, W);
      *out = wrap_measure(estimate_limit_spherical(r->r, arcs, W));
      return;
    }
    if (ms == "limit-linear") {
      GaugeBody B = parse_gauge(gauge_spec, r->r.dim);
      if (B.kind != GaugeKind::Segment)
        throw Error(Errc::invalid_argument, "limit-linear needs a segment gauge direction");
      ArcDecomposition arcs = visible_arcs(r->r, W);
      *out = wrap_measure(estimate_limit_linear(r->r, arcs, W, B.dir));
      return;
    }
    EstimatorConfig cfg;
    cfg.method = parse_method(ms);
    cfg.gauge = parse_gauge(gauge_spec, r->r.dim);
    cfg.f = WeightFunction::band(epsilon);
    cfg.grid_h = grid_h;
    cfg.minus_eps = minus_eps;
    *out = wrap_measure(estimate_edge_corrected(r->r, r->idx, W, cfg));
  });
}

sphs_status sphs_estimate_limit_linear_combined(const sphs_realization* r, double grid_h,
                                                sphs_measure** out) {
  (void)grid_h;  // the limit estimator is grid free; kept for signature stability
  if (!r || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    const Window& W = r->r.window;
    ArcDecomposition arcs = visible_arcs(r->r, W);
    StepCdf combined = estimate_limit_linear_combined(r->r, arcs, W);
    if (!combined.valid())
      throw Error(Errc::numeric_failure, "no direction produced a usable estimate");
    WeightedRadiusMeasure m;
    double prev = 0.0;
    for (std::size_t i = 0; i < combined.s.size(); ++i) {
      double w = combined.v[i] - prev;
      prev = combined.v[i];
      if (w > 0) {
        m.radii.push_back(combined.s[i]);
        m.weights.push_back(w);
      }
    }
    m.total = 1.0;
    *out = wrap_measure(std::move(m));
  });
}

void sphs_measure_free(sphs_measure* m) { delete m; }

sphs_status sphs_measure_size(const sphs_measure* m, size_t* out) {
  if (!m || !out) return invalid("null argument");
  *out = m->m.size();
  return SPHS_OK;
}

sphs_status sphs_measure_total(const sphs_measure* m, double* out) {
  if (!m || !out) return invalid("null argument");
  *out = m->m.total;
  return SPHS_OK;
}

sphs_status sphs_measure_atoms(const sphs_measure* m, double* radii, double* weights,
                               size_t capacity) {
  if (!m || !radii || !weights) return invalid("null argument");
  if (capacity < m->m.size()) return invalid("capacity below the atom count");
  for (std::size_t i = 0; i < m->m.size(); ++i) {
    radii[i] = m->m.radii[i];
    weights[i] = m->m.weights[i];
  }
  return SPHS_OK;
}

sphs_status sphs_measure_cdf(const sphs_measure* m, double s, double* out) {
  if (!m || !out) return invalid("null argument");
  *out = m->cdf.valid() ? m->cdf.at(s) : std::nan("");
  return SPHS_OK;
}

sphs_status sphs_measure_ratio(const sphs_measure* m, double lo, double hi, double* out) {
  if (!m || !out) return invalid("null argument");
  return guarded([&] {
    if (!(lo >= 0) || !(hi >= lo))
      throw Error(Errc::invalid_argument, "radius interval must satisfy 0 <= lo <= hi");
    *out = estimate_ratio(m->m, RadiusSet::interval(lo, hi));
  });
}

sphs_status sphs_measure_save_csv(const sphs_measure* m, const char* path,
                                  const double* cdf_knots, size_t n_knots) {
  if (!m || !path) return invalid("null argument");
  if (n_knots && !cdf_knots) return invalid("null knots with nonzero count");
  return guarded([&] {
    std::vector<double> knots(cdf_knots, cdf_knots + n_knots);
    save_measure_csv(m->m, path, knots);
  });
}

sphs_status sphs_ks_distance(const sphs_measure* m, const sphs_model* model, double* out) {
  if (!m || !model || !out) return invalid("null argument");
  return guarded([&] {
    if (!m->cdf.valid())
      throw Error(Errc::invalid_argument, "null estimate has no distribution function");
    *out = ks_distance(m->cdf, model->p.radii);
  });
}

sphs_status sphs_cvm_distance(const sphs_measure* m, const sphs_model* model, double* out) {
  if (!m || !model || !out) return invalid("null argument");
  return guarded([&] {
    if (!m->cdf.valid())
      throw Error(Errc::invalid_argument, "null estimate has no distribution function");
    *out = cvm_distance(m->cdf, model->p.radii);
  });
}

sphs_status sphs_sigma2(const sphs_model* m, double band_eps, double c_lo, double c_hi,
                        int qmc_points, int qmc_shifts, uint64_t seed, double* value, double* se,
                        double* tau1, double* tau2) {
  if (!m || !value) return invalid("null argument");
  return guarded([&] {
    QmcOptions opt;
    if (qmc_points > 0) opt.points_per_shift = qmc_points;
    if (qmc_shifts > 0) opt.shifts = qmc_shifts;
    opt.seed = seed;
    RadiusSet C = c_hi >= c_lo ? RadiusSet::interval(c_lo, c_hi) : RadiusSet::all();
    VarianceResult v = sigma2(C, m->p, WeightFunction::band(band_eps), opt);
    *value = v.value;
    if (se) *se = v.se;
    if (tau1) *tau1 = v.tau1;
    if (tau2) *tau2 = v.tau2;
  });
}

sphs_status sphs_sigma_g2(const sphs_model* m, double band_eps, double c_lo, double c_hi,
                          int qmc_points, int qmc_shifts, uint64_t seed, double* value,
                          double* se, double* alt_value, double* alt_se) {
  if (!m || !value) return invalid("null argument");
  return guarded([&] {
    QmcOptions opt;
    if (qmc_points > 0) opt.points_per_shift = qmc_points;
    if (qmc_shifts > 0) opt.shifts = qmc_shifts;
    opt.seed = seed;
    if (!(c_hi >= c_lo))
      throw Error(Errc::invalid_argument, "radius interval must satisfy lo <= hi");
    SigmaG2Result v =
        sigma_G2(RadiusSet::interval(c_lo, c_hi), m->p, WeightFunction::band(band_eps), opt);
    *value = v.value;
    if (se) *se = v.se;
    if (alt_value) *alt_value = v.alt_value;
    if (alt_se) *alt_se = v.alt_se;
  });
}

sphs_status sphs_run_table(const char* config_json, const char* out_csv,
                           const char* out_meta_json) {
  if (!config_json || !out_csv) return invalid("null argument");
  return guarded([&] {
    ExperimentConfig cfg = ExperimentConfig::from_json(config_json);
    TableResult t = run_table_experiment(cfg);
    write_table_csv(t, out_csv);
    if (out_meta_json) write_text_file(out_meta_json, table_meta_json(cfg, t));
  });
}

sphs_status sphs_run_validation(const char* config_json, const char* out_json, int* overall) {
  if (!config_json) return invalid("null argument");
  return guarded([&] {
    ValidationConfig cfg = ValidationConfig::from_json(config_json);
    ValidationReport rep = run_validation_suite(cfg);
    if (out_json) write_text_file(out_json, rep.json);
    if (overall) *overall = rep.overall;
  });
}

}  // extern "C"
