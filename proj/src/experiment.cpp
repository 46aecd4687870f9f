#include "experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "arc_estimators.hpp"
#include "common.hpp"
#include "csvio.hpp"
#include "distances.hpp"
#include "rng.hpp"
#include "variance.hpp"

#include "json.hpp"

namespace sphstat {

using nlohmann::json;

std::vector<TableRow> standard_rows() {
  std::vector<TableRow> rows;
  for (double e : {1.0, 0.05, 0.01}) rows.push_back({Method::Weighted, false, e});
  rows.push_back({Method::Weighted, true, 0.0});
  for (double e : {0.05, 0.01}) rows.push_back({Method::WeightedMinus, false, e});
  for (double e : {1.0, 0.05, 0.01}) rows.push_back({Method::Uncorrected, false, e});
  for (double e : {1.0, 0.05, 0.01}) rows.push_back({Method::Hanisch, false, e});
  return rows;
}

namespace {

std::string row_name(const TableRow& r) { return r.limit ? "limit" : method_name(r.method); }

std::string num(double v) { return format_double(v); }

TableRow row_from_json(const json& j) {
  TableRow r;
  std::string m = j.at("method").get<std::string>();
  if (m == "limit") {
    r.limit = true;
    if (j.contains("epsilon"))
      throw Error(Errc::invalid_argument, "limit rows take no bandwidth");
    return r;
  }
  r.method = parse_method(m);
  r.epsilon = j.at("epsilon").get<double>();
  return r;
}

Window window_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4)
    throw Error(Errc::invalid_argument, "window must be [x0, y0, x1, y1]");
  return Window::box2(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
                      j[3].get<double>());
}

json parse_json_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(Errc::invalid_argument, "malformed JSON configuration");
  if (!j.is_object()) throw Error(Errc::invalid_argument, "configuration must be a JSON object");
  return j;
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw Error(Errc::invalid_argument, "unknown configuration key: " + it.key());
  }
}

// Margin the realizations must provide so every configured row runs uncensored.
double rows_margin(const ModelParams& p, const std::vector<TableRow>& rows) {
  double need = radius_cap(p.radii);
  for (const TableRow& row : rows) {
    if (row.limit) continue;
    EstimatorConfig ec;
    ec.method = row.method;
    ec.f = WeightFunction::band(row.epsilon);
    ec.minus_eps = row.epsilon;
    need = std::max(need, required_margin(ec, p));
  }
  return need;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  json j = parse_json_text(text);
  reject_unknown_keys(j, {"gamma", "radius", "dim", "window", "grid_h", "replications", "seed",
                          "rows", "cdf_knots"});
  ExperimentConfig cfg;
  if (j.contains("gamma")) cfg.params.gamma = j["gamma"].get<double>();
  if (j.contains("radius")) cfg.params.radii = RadiusLaw::parse(j["radius"].get<std::string>());
  if (j.contains("dim")) cfg.params.dim = j["dim"].get<int>();
  if (j.contains("window")) cfg.window = window_from_json(j["window"]);
  if (j.contains("grid_h")) cfg.grid_h = j["grid_h"].get<double>();
  if (j.contains("replications")) cfg.replications = j["replications"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("rows")) {
    cfg.rows.clear();
    for (const json& rj : j["rows"]) cfg.rows.push_back(row_from_json(rj));
  }
  if (j.contains("cdf_knots")) cfg.cdf_knots = j["cdf_knots"].get<std::vector<double>>();
  cfg.validate();
  return cfg;
}

void ExperimentConfig::validate() const {
  params.validate();
  if (params.dim != 2)
    throw Error(Errc::unsupported, "the estimator comparison is planar only");
  if (!window.nonempty() || window.dim != 2)
    throw Error(Errc::invalid_argument, "observation window is empty");
  if (!(grid_h > 0)) throw Error(Errc::invalid_argument, "grid step must be positive");
  if (replications < 1) throw Error(Errc::invalid_argument, "need at least one replication");
  for (const TableRow& r : rows) {
    if (r.limit) continue;
    if (!(r.epsilon > 0) || !std::isfinite(r.epsilon))
      throw Error(Errc::invalid_argument, "estimator bandwidth must be positive and finite");
  }
  for (double k : cdf_knots)
    if (!(k >= 0) || !std::isfinite(k))
      throw Error(Errc::invalid_argument, "cdf knots must be finite and nonnegative");
}

std::string ExperimentConfig::canonical() const {
  std::string s = "gamma=" + num(params.gamma) + ";radius=" + params.radii.spec() +
                  ";dim=" + std::to_string(params.dim) + ";window=" + num(window.lo[0]) + "," +
                  num(window.lo[1]) + "," + num(window.hi[0]) + "," + num(window.hi[1]) +
                  ";h=" + num(grid_h) + ";reps=" + std::to_string(replications) +
                  ";seed=" + std::to_string(seed) + ";rows=";
  const std::vector<TableRow> rs = rows.empty() ? standard_rows() : rows;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (i) s += ",";
    s += row_name(rs[i]);
    if (!rs[i].limit) s += ":" + num(rs[i].epsilon);
  }
  s += ";knots=";
  for (std::size_t i = 0; i < cdf_knots.size(); ++i) {
    if (i) s += ",";
    s += num(cdf_knots[i]);
  }
  return s;
}

std::uint64_t ExperimentConfig::config_hash() const {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

FusedEstimates fused_table_pass(const Realization& r, const GridIndex& idx, const Window& W,
                                const std::vector<TableRow>& rows, double grid_h) {
  if (r.dim != 2) throw Error(Errc::unsupported, "grid estimators are planar only");
  if (!(grid_h > 0)) throw Error(Errc::invalid_argument, "grid step must be positive");
  double need = rows_margin(r.params, rows);
  if (r.margin + 1e-12 < need)
    throw Error(Errc::insufficient_margin,
                "realization margin too small for the configured estimator rows");

  FusedEstimates fe;
  fe.spherical.resize(rows.size());
  for (int d = 0; d < 4; ++d) fe.directional[d].resize(rows.size());

  bool any_limit = false;
  for (const TableRow& row : rows) any_limit |= row.limit;
  ArcDecomposition arcs;
  if (any_limit) arcs = visible_arcs(r, W);

  const double area = grid_h * grid_h;
  const LatticeRange lat = lattice_over(W, grid_h);
  const double dirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

  // pass = -1: spherical gauge; 0..3: the four segment directions
  for (int pass = -1; pass < 4; ++pass) {
    const bool seg = pass >= 0;
    const GaugeBody B = seg ? GaugeBody::segment2(dirs[pass][0], dirs[pass][1])
                            : GaugeBody::ball(2);
    std::vector<WeightedRadiusMeasure>& out = seg ? fe.directional[pass] : fe.spherical;
    const HDensity hd(B);

    std::vector<std::size_t> wrows, mrows, hrows, urows;
    std::vector<WeightFunction> f_of(rows.size());
    std::vector<LatticeRange> mrange(rows.size());
    std::vector<Window> mwin(rows.size());
    double cut_wm = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const TableRow& row = rows[i];
      if (row.limit) {
        out[i] = seg ? estimate_limit_linear(r, arcs, W, B.dir)
                     : estimate_limit_spherical(r, arcs, W);
        continue;
      }
      f_of[i] = WeightFunction::band(row.epsilon);
      switch (row.method) {
        case Method::Weighted:
          wrows.push_back(i);
          cut_wm = std::max(cut_wm, row.epsilon);
          break;
        case Method::WeightedMinus:
          mrows.push_back(i);
          cut_wm = std::max(cut_wm, row.epsilon);
          mwin[i] = seg ? W.eroded_segment(B.dir, row.epsilon) : W.eroded_ball(row.epsilon);
          if (!mwin[i].nonempty())
            throw Error(Errc::invalid_argument,
                        "eroded window is empty; reduce the erosion depth");
          mrange[i] = lattice_over(mwin[i], grid_h);
          break;
        case Method::Hanisch:
          hrows.push_back(i);
          break;
        case Method::Uncorrected:
          // the segment case shares the boundary-capped contact with Hanisch
          (seg ? hrows : urows).push_back(i);
          break;
      }
    }

    std::vector<char> meets;
    double cut_u = 0.0;
    if (!urows.empty()) {
      meets.resize(r.count());
      for (std::size_t g = 0; g < r.count(); ++g)
        meets[g] = ball_meets_box(r.center(g), r.radii[g], W) ? 1 : 0;
      for (std::size_t i : urows) cut_u = std::max(cut_u, rows[i].epsilon);
    }
    double cut_h = 0.0;
    for (std::size_t i : hrows) cut_h = std::max(cut_h, rows[i].epsilon);
    const bool need_full = cut_wm > 0 || cut_h > 0;
    const bool need_bd = cut_h > 0;

    if (wrows.empty() && mrows.empty() && hrows.empty() && urows.empty()) continue;

    std::vector<MeasureBuilder> builders(rows.size());
    std::vector<std::vector<std::pair<double, double>>> rowbuf(rows.size());
    for (long l = lat.l0; l <= lat.l1; ++l) {
      for (auto& buf : rowbuf) buf.clear();
      double y = (double(l) - 0.5) * grid_h;
      for (long k = lat.k0; k <= lat.k1; ++k) {
        double x[2] = {(double(k) - 0.5) * grid_h, y};
        if (!W.contains(x)) continue;

        double bd = kInf;
        if (need_bd) bd = seg ? W.ray_exit(x, B.dir) : W.boundary_distance(x);

        ContactRecord rec;
        if (need_full) {
          double cut = cut_wm;
          if (cut_h > 0) cut = std::max(cut, std::min(cut_h, bd));
          rec = contact(x, r, idx, B, cut);
        }

        auto emit = [&](std::size_t i, double dist, double radius) {
          if (!(dist > 0.0)) return;
          double fv = f_of[i](dist);
          if (fv <= 0.0) return;
          double h = hd(dist, radius);
          if (!(h > 0.0)) return;  // zero-radius grain under the segment gauge
          rowbuf[i].emplace_back(radius, fv / h * area);
        };

        if (rec.found) {
          for (std::size_t i : wrows) emit(i, rec.distance, rec.radius);
          for (std::size_t i : mrows)
            if (l >= mrange[i].l0 && l <= mrange[i].l1 && k >= mrange[i].k0 &&
                k <= mrange[i].k1 && mwin[i].contains(x))
              emit(i, rec.distance, rec.radius);
          if (rec.distance <= bd)
            for (std::size_t i : hrows) emit(i, rec.distance, rec.radius);
        }
        if (!urows.empty()) {
          std::int64_t g = -1;
          double d = kInf;
          idx.search_min(
              x, cut_u,
              [&](std::int32_t gi) {
                if (!meets[std::size_t(gi)]) return kInf;
                return clipped_ball_distance(x, r.center(std::size_t(gi)),
                                             r.radii[std::size_t(gi)], W);
              },
              &d, &g);
          if (g >= 0)
            for (std::size_t i : urows) emit(i, d, r.radii[std::size_t(g)]);
        }
      }
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (const auto& [rad, w] : rowbuf[i]) builders[i].add(rad, w);
    }
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (!rows[i].limit) out[i] = builders[i].finish();
  }
  return fe;
}

TableResult run_table_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<TableRow> rows = cfg.rows.empty() ? standard_rows() : cfg.rows;
  const double margin = rows_margin(cfg.params, rows);
  const std::size_t nr = rows.size();

  struct Acc {
    double sum = 0.0, sumsq = 0.0;
    void add(double v) {
      sum += v;
      sumsq += v * v;
    }
  };
  std::vector<Acc> acc(nr * 4);  // [row * 4 + gauge * 2 + metric]
  int used = 0, aborted = 0;

  for (int rep = 0; rep < cfg.replications; ++rep) {
    try {
      std::uint64_t rseed = Rng::derive(cfg.seed, std::uint64_t(rep));
      Realization real = sample_realization(cfg.params, cfg.window, margin, rseed);
      GridIndex idx;
      idx.build(real, 0.0);
      FusedEstimates fe = fused_table_pass(real, idx, cfg.window, rows, cfg.grid_h);

      std::vector<double> vals(nr * 4);
      for (std::size_t i = 0; i < nr; ++i) {
        StepCdf sph = StepCdf::from_measure(fe.spherical[i]);
        std::vector<StepCdf> parts;
        for (int d = 0; d < 4; ++d) parts.push_back(StepCdf::from_measure(fe.directional[d][i]));
        StepCdf lin = StepCdf::average(parts);
        if (!sph.valid() || !lin.valid())
          throw Error(Errc::numeric_failure, "null estimate in replication");
        vals[i * 4 + 0] = ks_distance(sph, cfg.params.radii);
        vals[i * 4 + 1] = 1000.0 * cvm_distance(sph, cfg.params.radii);
        vals[i * 4 + 2] = ks_distance(lin, cfg.params.radii);
        vals[i * 4 + 3] = 1000.0 * cvm_distance(lin, cfg.params.radii);
      }
      // commit only complete replications so every cell averages the same reps;
      // vals and acc share the [row][gauge][metric] layout
      for (std::size_t i = 0; i < nr * 4; ++i) acc[i].add(vals[i]);
      ++used;
    } catch (const Error&) {
      ++aborted;
    }
  }

  if (used == 0)
    throw Error(Errc::validation_failed, "every replication of the campaign aborted");
  if (100.0 * aborted / cfg.replications > 1.0)
    throw Error(Errc::validation_failed,
                "aborted replications exceed 1% of the campaign (" +
                    std::to_string(aborted) + " of " + std::to_string(cfg.replications) + ")");

  TableResult out;
  out.replications = used;
  out.aborted = aborted;
  out.seed = cfg.seed;
  out.config_hash = cfg.config_hash();
  out.rows.resize(nr);
  for (std::size_t i = 0; i < nr; ++i) {
    out.rows[i].row = rows[i];
    for (int g = 0; g < 2; ++g)
      for (int m = 0; m < 2; ++m) {
        const Acc& a = acc[i * 4 + std::size_t(g) * 2 + std::size_t(m)];
        double mean = a.sum / used;
        double var = used > 1 ? std::max(0.0, (a.sumsq - a.sum * a.sum / used) / (used - 1))
                              : 0.0;
        out.rows[i].cell[g][m] = {mean, std::sqrt(var / used)};
      }
  }
  return out;
}

void write_table_csv(const TableResult& t, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error(Errc::io_failure, "cannot open " + path + " for writing");
  char hashbuf[32];
  std::snprintf(hashbuf, sizeof hashbuf, "%016llx", (unsigned long long)t.config_hash);
  os << "# spherestats table v1\n";
  os << "# config_hash=" << hashbuf << " seed=" << t.seed
     << " replications=" << t.replications << " aborted=" << t.aborted << "\n";
  os << "estimator,epsilon,ks_spherical_mean,ks_spherical_se,ks_linear_mean,ks_linear_se,"
        "cvm1000_spherical_mean,cvm1000_spherical_se,cvm1000_linear_mean,cvm1000_linear_se\n";
  for (const TableResultRow& r : t.rows) {
    os << row_name(r.row) << ",";
    if (!r.row.limit) os << format_double(r.row.epsilon);
    os << "," << format_double(r.cell[0][0].mean) << "," << format_double(r.cell[0][0].se)
       << "," << format_double(r.cell[1][0].mean) << "," << format_double(r.cell[1][0].se)
       << "," << format_double(r.cell[0][1].mean) << "," << format_double(r.cell[0][1].se)
       << "," << format_double(r.cell[1][1].mean) << "," << format_double(r.cell[1][1].se)
       << "\n";
  }
  if (!os) throw Error(Errc::io_failure, "failed writing " + path);
}

std::string table_meta_json(const ExperimentConfig& cfg, const TableResult& t) {
  const std::vector<TableRow> rows = cfg.rows.empty() ? standard_rows() : cfg.rows;
  json j;
  j["kind"] = "spherestats-table";
  j["version"] = kVersion;
  char hashbuf[32];
  std::snprintf(hashbuf, sizeof hashbuf, "%016llx", (unsigned long long)t.config_hash);
  j["config_hash"] = hashbuf;
  j["seed"] = t.seed;
  j["replications"] = t.replications;
  j["aborted"] = t.aborted;
  json jc;
  jc["gamma"] = cfg.params.gamma;
  jc["radius"] = cfg.params.radii.spec();
  jc["dim"] = cfg.params.dim;
  jc["window"] = {cfg.window.lo[0], cfg.window.lo[1], cfg.window.hi[0], cfg.window.hi[1]};
  jc["grid_h"] = cfg.grid_h;
  jc["replications"] = cfg.replications;
  jc["seed"] = cfg.seed;
  j["config"] = jc;
  json jr = json::array();
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const TableResultRow& r = t.rows[i];
    json e;
    e["estimator"] = row_name(r.row);
    if (!r.row.limit) e["epsilon"] = r.row.epsilon;
    const char* gname[2] = {"spherical", "linear"};
    const char* mname[2] = {"ks", "cvm1000"};
    for (int g = 0; g < 2; ++g)
      for (int m = 0; m < 2; ++m)
        e[mname[m]][gname[g]] = {{"mean", r.cell[g][m].mean}, {"se", r.cell[g][m].se}};
    jr.push_back(e);
  }
  j["results"] = jr;
  return j.dump(2);
}

IdentityCheck weight_identity_check(const GaugeBody& B, double grain_radius,
                                    const WeightFunction& f, int samples, std::uint64_t seed) {
  if (B.dim != 2) throw Error(Errc::unsupported, "identity check is planar only");
  if (!(grain_radius > 0))
    throw Error(Errc::invalid_argument, "grain radius must be positive");
  f.validate();
  if (samples < 2) throw Error(Errc::invalid_argument, "need at least two sample points");
  const double L = grain_radius + f.support_hi();
  const double box_area = (2 * L) * (2 * L);
  const double c[2] = {0.0, 0.0};
  const HDensity hd(B);
  Rng rng(seed);
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < samples; ++i) {
    double x[2] = {rng.uniform(-L, L), rng.uniform(-L, L)};
    double d = gauge_distance_to_ball(x, c, grain_radius, B);
    double v = 0.0;
    if (d > 0.0 && std::isfinite(d)) {
      double fv = f(d);
      if (fv > 0.0) {
        double h = hd(d, grain_radius);
        if (h > 0.0) v = fv / h;
      }
    }
    sum += v;
    sumsq += v * v;
  }
  IdentityCheck out;
  out.samples = samples;
  out.analytic = f.integral();
  double mean = sum / samples;
  double var = std::max(0.0, (sumsq - sum * sum / samples) / (samples - 1));
  out.estimate = box_area * mean;
  out.se = box_area * std::sqrt(var / samples);
  return out;
}

ValidationConfig ValidationConfig::from_json(const std::string& text) {
  json j = parse_json_text(text);
  reject_unknown_keys(
      j, {"gamma", "radius", "dim", "window", "grid_h", "replications", "seed", "band_eps",
          "hb_scale", "bounds_samples", "bounds_mc_triples", "bounds_mc_reps", "variance_n",
          "variance_reps", "clt_n", "clt_reps", "qmc_points", "qmc_shifts"});
  ValidationConfig cfg;
  if (j.contains("gamma")) cfg.params.gamma = j["gamma"].get<double>();
  if (j.contains("radius")) cfg.params.radii = RadiusLaw::parse(j["radius"].get<std::string>());
  if (j.contains("dim")) cfg.params.dim = j["dim"].get<int>();
  if (j.contains("window")) cfg.window = window_from_json(j["window"]);
  if (j.contains("grid_h")) cfg.grid_h = j["grid_h"].get<double>();
  if (j.contains("replications")) cfg.replications = j["replications"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("band_eps")) cfg.band_eps = j["band_eps"].get<double>();
  if (j.contains("hb_scale")) cfg.hb_scale = j["hb_scale"].get<double>();
  if (j.contains("bounds_samples")) cfg.bounds_samples = j["bounds_samples"].get<int>();
  if (j.contains("bounds_mc_triples")) cfg.bounds_mc_triples = j["bounds_mc_triples"].get<int>();
  if (j.contains("bounds_mc_reps")) cfg.bounds_mc_reps = j["bounds_mc_reps"].get<int>();
  if (j.contains("variance_n")) cfg.variance_n = j["variance_n"].get<std::vector<double>>();
  if (j.contains("variance_reps")) cfg.variance_reps = j["variance_reps"].get<int>();
  if (j.contains("clt_n")) cfg.clt_n = j["clt_n"].get<double>();
  if (j.contains("clt_reps")) cfg.clt_reps = j["clt_reps"].get<int>();
  if (j.contains("qmc_points")) cfg.qmc_points = j["qmc_points"].get<int>();
  if (j.contains("qmc_shifts")) cfg.qmc_shifts = j["qmc_shifts"].get<int>();
  cfg.validate();
  return cfg;
}

void ValidationConfig::validate() const {
  params.validate();
  if (params.dim != 2) throw Error(Errc::unsupported, "validation suites are planar only");
  if (!window.nonempty() || window.dim != 2)
    throw Error(Errc::invalid_argument, "observation window is empty");
  if (!(grid_h > 0)) throw Error(Errc::invalid_argument, "grid step must be positive");
  if (replications < 0) throw Error(Errc::invalid_argument, "replications must be nonnegative");
  if (!(band_eps > 0)) throw Error(Errc::invalid_argument, "band width must be positive");
  if (!(hb_scale > 0)) throw Error(Errc::invalid_argument, "density scale must be positive");
  if (bounds_samples < 0 || bounds_mc_triples < 0 || bounds_mc_reps < 0 || variance_reps < 0 ||
      clt_reps < 0)
    throw Error(Errc::invalid_argument, "sample counts must be nonnegative");
  if (!(clt_n > 0)) throw Error(Errc::invalid_argument, "window scale must be positive");
  if (qmc_points < 2 || qmc_shifts < 2)
    throw Error(Errc::invalid_argument, "need at least two integration points and shifts");
  for (double n : variance_n)
    if (!(n > 0)) throw Error(Errc::invalid_argument, "window scales must be positive");
}

namespace {

struct Welford {
  int n = 0;
  double sum = 0.0, sumsq = 0.0;
  void add(double v) {
    ++n;
    sum += v;
    sumsq += v * v;
  }
  double mean() const { return n ? sum / n : 0.0; }
  double se() const {
    if (n < 2) return 0.0;
    double var = std::max(0.0, (sumsq - sum * sum / n) / (n - 1));
    return std::sqrt(var / n);
  }
};

std::string fmt(const char* pattern, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
  return buf;
}

}  // namespace

SuiteResult unbiasedness_suite(const ValidationConfig& cfg) {
  SuiteResult sr{"unbiasedness", "pass", ""};
  const WeightFunction f = WeightFunction::band(cfg.band_eps);
  const double margin = radius_cap(cfg.params.radii) + cfg.band_eps;
  const std::vector<std::pair<std::string, RadiusSet>> csets = {
      {"[0,0.06]", RadiusSet::interval(0.0, 0.06)},
      {"[0.06,0.08]", RadiusSet::interval(0.06, 0.08)},
      {"[0.07,inf)", RadiusSet::interval(0.07, kInf)},
      {"all", RadiusSet::all()},
      {"[0,0.055]", RadiusSet::interval(0.0, 0.055)},
  };
  const GaugeBody gauges[2] = {GaugeBody::ball(2), GaugeBody::segment2(1.0, 0.0)};
  LatticeRange lat = lattice_over(cfg.window, cfg.grid_h);
  double vol_eff =
      cfg.grid_h * cfg.grid_h * double(lat.k1 - lat.k0 + 1) * double(lat.l1 - lat.l0 + 1);
  double worst = 0.0;
  std::string worst_tag;
  for (int gi = 0; gi < 2; ++gi) {
    double beta = beta_constant(f, cfg.params, gauges[gi]);
    std::vector<Welford> stats(csets.size());
    for (int rep = 0; rep < cfg.replications; ++rep) {
      std::uint64_t seed = Rng::derive(cfg.seed, (std::uint64_t(gi + 1) << 32) | unsigned(rep));
      Realization real = sample_realization(cfg.params, cfg.window, margin, seed);
      GridIndex idx;
      idx.build(real, 0.0);
      WeightedRadiusMeasure m = eta_measure(real, idx, cfg.window, gauges[gi], f, cfg.grid_h);
      for (std::size_t ci = 0; ci < csets.size(); ++ci)
        stats[ci].add(m.mass(csets[ci].second) / cfg.hb_scale);
    }
    for (std::size_t ci = 0; ci < csets.size(); ++ci) {
      double expect = cfg.params.gamma * beta * vol_eff * csets[ci].second.law_mass(cfg.params.radii);
      double diff = std::abs(stats[ci].mean() - expect);
      double se = stats[ci].se();
      double z = diff / (se > 0 ? se : 1e-300);
      if (diff > 3.0 * se + 1e-12) {
        sr.status = "fail";
        if (z > worst) {
          worst = z;
          worst_tag = (gi ? "segment " : "ball ") + csets[ci].first +
                      fmt(": mean %.6g vs expected %.6g (z=%.2f)", stats[ci].mean(), expect, z);
        }
      } else if (sr.status == "pass" && z > worst) {
        worst = z;
        worst_tag = (gi ? "segment " : "ball ") + csets[ci].first + fmt(": z=%.2f", z);
      }
    }
  }
  sr.detail = fmt("%.0f replications x 2 gauges x 5 radius classes; worst ", double(cfg.replications)) +
              worst_tag;
  return sr;
}

namespace {

SuiteResult identity_suite(const ValidationConfig& cfg) {
  SuiteResult sr{"weight_identity", "pass", ""};
  struct Combo {
    GaugeBody B;
    double radius;
    double eps;
  };
  const Combo combos[6] = {
      {GaugeBody::ball(2), 0.05, 0.05},  {GaugeBody::ball(2), 0.1, 1.0},
      {GaugeBody::ball(2), 0.075, 0.01}, {GaugeBody::segment2(1.0, 0.0), 0.05, 0.05},
      {GaugeBody::segment2(1.0, 0.0), 0.1, 1.0}, {GaugeBody::segment2(0.0, 1.0), 0.075, 0.01},
  };
  int samples = std::max(10000, cfg.replications * 300);
  double worst = 0.0;
  for (int i = 0; i < 6; ++i) {
    IdentityCheck c = weight_identity_check(combos[i].B, combos[i].radius,
                                            WeightFunction::band(combos[i].eps), samples,
                                            Rng::derive(cfg.seed, 0x1d000000ULL + unsigned(i)));
    double z = std::abs(c.estimate - c.analytic) / (c.se > 0 ? c.se : 1e-300);
    worst = std::max(worst, z);
    if (std::abs(c.estimate - c.analytic) > 3.0 * c.se) sr.status = "fail";
  }
  sr.detail = fmt("6 gauge/radius/bandwidth combos, %.0f samples each; worst z=%.2f",
                  double(samples), worst);
  return sr;
}

SuiteResult bounds_suite(const ValidationConfig& cfg) {
  SuiteResult sr{"second_order_bounds", "pass", ""};
  const GaugeBody ball = GaugeBody::ball(2);
  const double rcap = radius_cap(cfg.params.radii);
  const double tmax = fbar_horizon(cfg.params, ball);
  Rng rng(Rng::derive(cfg.seed, 0xb0d5ULL));
  int violations = 0;
  for (int i = 0; i < cfg.bounds_samples; ++i) {
    double dist = rng.uniform(0.0, 2.2 * (tmax + rcap));
    double t1 = rng.uniform(0.0, tmax), t2 = rng.uniform(0.0, tmax);
    double f1 = empty_space_Fbar(t1, cfg.params, ball);
    double f2 = empty_space_Fbar(t2, cfg.params, ball);
    double lo = f1 * f2, hi = std::sqrt(lo);
    double v = second_order_Fbar2(dist, t1, t2, cfg.params);
    if (v < lo * (1 - 1e-12) - 1e-300 || v > hi * (1 + 1e-12) + 1e-300) ++violations;
  }
  if (violations) sr.status = "fail";

  // empirical spot checks of the two-point survival itself
  double worstz = 0.0;
  for (int tr = 0; tr < cfg.bounds_mc_triples; ++tr) {
    double dist = rng.uniform(0.05, 0.3);
    double t1 = rng.uniform(0.02, 0.12), t2 = rng.uniform(0.02, 0.12);
    double p = second_order_Fbar2(dist, t1, t2, cfg.params);
    double probe = std::max(t1, t2);
    Window w = Window::box2(0.0, 0.0, dist, 1e-9);
    const double x1[2] = {0.0, 0.0}, x2[2] = {dist, 0.0};
    int hits = 0;
    for (int rep = 0; rep < cfg.bounds_mc_reps; ++rep) {
      std::uint64_t seed =
          Rng::derive(cfg.seed, 0xe3000000ULL + (std::uint64_t(tr) << 24) + unsigned(rep));
      Realization real = sample_realization(cfg.params, w, rcap + probe, seed);
      GridIndex idx;
      idx.build(real, 0.0);
      bool s1 = !contact(x1, real, idx, ball, t1).found;
      bool s2 = !contact(x2, real, idx, ball, t2).found;
      if (s1 && s2) ++hits;
    }
    double emp = double(hits) / cfg.bounds_mc_reps;
    double se = std::sqrt(std::max(p * (1 - p), 1e-12) / cfg.bounds_mc_reps);
    double z = std::abs(emp - p) / se;
    worstz = std::max(worstz, z);
    if (z > 3.0) sr.status = "fail";
  }
  sr.detail = fmt("%.0f analytic triples, %.0f violations; ", double(cfg.bounds_samples),
                  double(violations)) +
              fmt("%.0f empirical triples x %.0f realizations, worst z=%.2f",
                  double(cfg.bounds_mc_triples), double(cfg.bounds_mc_reps), worstz);
  return sr;
}

SuiteResult structural_suite(const ValidationConfig& cfg) {
  SuiteResult sr{"structural_identities", "pass", ""};
  const WeightFunction f = WeightFunction::band(cfg.band_eps);
  const double margin = radius_cap(cfg.params.radii) + cfg.band_eps;
  const GaugeBody seg = GaugeBody::segment2(1.0, 0.0);
  const GaugeBody ball = GaugeBody::ball(2);
  int reps = std::min(cfg.replications, 50);
  bool match = true, ratio_one = true;
  for (int rep = 0; rep < reps; ++rep) {
    std::uint64_t seed = Rng::derive(cfg.seed, 0x57000000ULL + unsigned(rep));
    Realization real = sample_realization(cfg.params, cfg.window, margin, seed);
    GridIndex idx;
    idx.build(real, 0.0);
    EstimatorConfig ec;
    ec.gauge = seg;
    ec.f = f;
    ec.grid_h = cfg.grid_h;
    ec.method = Method::Hanisch;
    WeightedRadiusMeasure mh = estimate_edge_corrected(real, idx, cfg.window, ec);
    ec.method = Method::Uncorrected;
    WeightedRadiusMeasure mu = estimate_edge_corrected(real, idx, cfg.window, ec);
    if (mh.radii != mu.radii || mh.weights != mu.weights || mh.total != mu.total) match = false;
    WeightedRadiusMeasure mb = eta_measure(real, idx, cfg.window, ball, f, cfg.grid_h);
    if (mb.normalizable() && estimate_ratio(mb, RadiusSet::all()) != 1.0) ratio_one = false;
  }
  bool null_nan = std::isnan(estimate_ratio(MeasureBuilder{}.finish(), RadiusSet::all()));
  if (!match || !ratio_one || !null_nan) sr.status = "fail";
  sr.detail = fmt("%.0f replications: ", double(reps)) +
              std::string(match ? "boundary-capped segment estimators identical"
                                : "boundary-capped segment estimators DIFFER") +
              (ratio_one ? "; full-line ratio exactly 1" : "; full-line ratio NOT 1") +
              (null_nan ? "; null estimate gives NaN ratio" : "; null ratio convention broken");
  return sr;
}

SuiteResult variance_suite(const ValidationConfig& cfg) {
  SuiteResult sr{"variance_convergence", "pass", ""};
  const WeightFunction f = WeightFunction::band(cfg.band_eps);
  const RadiusSet C = RadiusSet::all();
  std::vector<double> ns = cfg.variance_n;
  if (ns.empty()) ns = {2.0, 3.0};
  QmcOptions qopt;
  qopt.points_per_shift = cfg.qmc_points;
  qopt.shifts = cfg.qmc_shifts;
  qopt.seed = Rng::derive(cfg.seed, 0x0a5cULL);
  VarianceResult sig = sigma2(C, cfg.params, f, qopt);
  if (!(sig.value > 0)) {
    sr.status = "fail";
    sr.detail = "integrated variance is not positive";
    return sr;
  }
  std::vector<VarianceCurvePoint> curve = empirical_variance_curve(
      C, cfg.params, f, cfg.grid_h, ns, cfg.variance_reps, Rng::derive(cfg.seed, 0xcbbeULL));
  double last = curve.back().normalized_variance;
  double rel = std::abs(last - sig.value) / sig.value;
  if (rel > 0.30) sr.status = "fail";
  sr.detail = fmt("integrated variance %.6g (se %.2g); ", sig.value, sig.se) +
              fmt("empirical at n=%g: %.6g (%.0f reps, rel gap %.1f%%)", curve.back().n, last,
                  double(curve.back().reps), 100.0 * rel);
  return sr;
}

SuiteResult clt_suite(const ValidationConfig& cfg) {
  SuiteResult sr{"clt", "pass", ""};
  const WeightFunction f = WeightFunction::band(cfg.band_eps);
  const RadiusSet C = RadiusSet::interval(0.0, 0.075);
  QmcOptions qopt;
  qopt.points_per_shift = cfg.qmc_points;
  qopt.shifts = cfg.qmc_shifts;
  qopt.seed = Rng::derive(cfg.seed, 0xc17aULL);
  CltReport rep = clt_campaign(C, cfg.params, f, cfg.clt_n, cfg.clt_reps, cfg.grid_h,
                               Rng::derive(cfg.seed, 0xc17bULL), qopt);
  bool ok = rep.aborted == 0 && rep.ks_p >= 0.01 && std::abs(rep.sample_var_ratio - 1.0) <= 0.35;
  if (!ok) sr.status = "fail";
  sr.detail = fmt("%.0f replications at n=%g: ", double(rep.reps), cfg.clt_n) +
              fmt("normality KS=%.4f (p=%.3f), variance ratio %.3f", rep.ks_stat, rep.ks_p,
                  rep.sample_var_ratio) +
              (rep.aborted ? fmt(", %.0f aborted", double(rep.aborted)) : "");
  return sr;
}

}  // namespace

ValidationReport run_validation_suite(const ValidationConfig& cfg) {
  cfg.validate();
  ValidationReport out;
  const char* names[6] = {"unbiasedness",         "weight_identity", "second_order_bounds",
                          "structural_identities", "variance_convergence", "clt"};
  if (cfg.replications == 0) {
    for (const char* n : names) out.suites.push_back({n, "skipped", "no replications requested"});
    out.overall = 2;
  } else {
    SuiteResult (*suites[6])(const ValidationConfig&) = {
        unbiasedness_suite, identity_suite, bounds_suite,
        structural_suite,   variance_suite, clt_suite};
    for (int i = 0; i < 6; ++i) {
      try {
        out.suites.push_back(suites[i](cfg));
      } catch (const Error& e) {
        out.suites.push_back({names[i], "fail", std::string("error: ") + e.what()});
      }
    }
    out.overall = 0;
    for (const SuiteResult& s : out.suites)
      if (s.status == "fail") out.overall = 1;
  }

  json j;
  j["kind"] = "spherestats-validation";
  j["version"] = kVersion;
  j["overall"] = out.overall;
  json jc;
  jc["gamma"] = cfg.params.gamma;
  jc["radius"] = cfg.params.radii.spec();
  jc["dim"] = cfg.params.dim;
  jc["window"] = {cfg.window.lo[0], cfg.window.lo[1], cfg.window.hi[0], cfg.window.hi[1]};
  jc["grid_h"] = cfg.grid_h;
  jc["replications"] = cfg.replications;
  jc["seed"] = cfg.seed;
  jc["band_eps"] = cfg.band_eps;
  jc["hb_scale"] = cfg.hb_scale;
  j["config"] = jc;
  json js = json::array();
  for (const SuiteResult& s : out.suites)
    js.push_back({{"name", s.name}, {"status", s.status}, {"detail", s.detail}});
  j["suites"] = js;
  out.json = j.dump(2);
  return out;
}

}  // namespace sphstat
