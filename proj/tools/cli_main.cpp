// spherestats command line front end. Talks to the library exclusively
// through the C interface in spherestats.h.

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spherestats.h"

namespace {

using nlohmann::json;

constexpr int kExitValidation = 2;
constexpr int kExitConfig = 3;

int fail(sphs_status st) {
  std::fprintf(stderr, "error: %s\n", sphs_last_error());
  return st == SPHS_E_VALIDATION ? kExitValidation : kExitConfig;
}

int fail_msg(const std::string& msg) {
  std::fprintf(stderr, "error: %s\n", msg.c_str());
  return kExitConfig;
}

// "x0:y0:x1:y1" (or six fields in three dimensions)
bool parse_window(const std::string& s, int dim, std::vector<double>& lo,
                  std::vector<double>& hi) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ':')) {
    try {
      size_t pos = 0;
      v.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) return false;
    } catch (...) {
      return false;
    }
  }
  if ((int)v.size() != 2 * dim) return false;
  lo.assign(v.begin(), v.begin() + dim);
  hi.assign(v.begin() + dim, v.end());
  return true;
}

struct ModelFlags {
  double gamma = 25.0;
  std::string radius = "uniform:0.05:0.1";
  int dim = 2;
  std::string window = "0:0:1:1";

  void attach(CLI::App* cmd) {
    cmd->add_option("--gamma", gamma, "grain intensity (germs per unit volume)");
    cmd->add_option("--radius-dist", radius, "radius law: uniform:a:b | exp:rate | det:r0");
    cmd->add_option("--dim", dim, "space dimension")->check(CLI::Range(2, 3));
    cmd->add_option("--window", window, "observation window x0:y0:x1:y1");
  }
};

struct Model {
  sphs_model* m = nullptr;
  ~Model() { sphs_model_free(m); }
};

struct Realization {
  sphs_realization* r = nullptr;
  ~Realization() { sphs_realization_free(r); }
};

struct Measure {
  sphs_measure* m = nullptr;
  ~Measure() { sphs_measure_free(m); }
};

int make_model(const ModelFlags& mf, Model& model) {
  sphs_status st = sphs_model_new(mf.gamma, mf.radius.c_str(), mf.dim, &model.m);
  return st == SPHS_OK ? 0 : fail(st);
}

int simulate_into(const ModelFlags& mf, const Model& model, double margin, double probe,
                  uint64_t seed, Realization& real) {
  std::vector<double> lo, hi;
  if (!parse_window(mf.window, mf.dim, lo, hi))
    return fail_msg("bad --window (expected " + std::to_string(2 * mf.dim) +
                    " colon-separated numbers)");
  sphs_status st =
      sphs_simulate(model.m, lo.data(), hi.data(), margin, probe, seed, &real.r);
  return st == SPHS_OK ? 0 : fail(st);
}

// Overlay: defaults come from the library, file values replace them, and any
// flag the user typed replaces the file value.
json load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file " + path);
  json j = json::parse(is, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw std::runtime_error("config file is not a JSON object: " + path);
  return j;
}

int run_config_command(const std::string& config_path, const json& overlay, bool is_validation,
                       const std::string& out1, const std::string& out2) {
  json cfg = json::object();
  try {
    if (!config_path.empty()) cfg = load_config_file(config_path);
  } catch (const std::exception& e) {
    return fail_msg(e.what());
  }
  for (auto it = overlay.begin(); it != overlay.end(); ++it) cfg[it.key()] = it.value();
  std::string text = cfg.dump();
  if (is_validation) {
    int overall = 0;
    sphs_status st =
        sphs_run_validation(text.c_str(), out1.empty() ? nullptr : out1.c_str(), &overall);
    if (st != SPHS_OK) return fail(st);
    if (overall == 2) {
      std::printf("validation skipped (zero replications)\n");
      return 0;
    }
    std::printf("validation %s\n", overall == 0 ? "passed" : "FAILED");
    if (!out1.empty()) std::printf("report: %s\n", out1.c_str());
    return overall == 0 ? 0 : kExitValidation;
  }
  sphs_status st = sphs_run_table(text.c_str(), out1.c_str(),
                                  out2.empty() ? nullptr : out2.c_str());
  if (st != SPHS_OK) return fail(st);
  std::printf("table written to %s\n", out1.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poisson Boolean model simulation and radius-distribution estimation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sphs_version()));

  // simulate ---------------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "sample a realization and save it as CSV");
  ModelFlags sim_mf;
  sim_mf.attach(sim);
  double sim_margin = -1.0, sim_probe = 1.0;
  uint64_t sim_seed = 0;
  std::string sim_out;
  sim->add_option("--margin", sim_margin, "germ margin beyond the window (negative = auto)");
  sim->add_option("--probe-depth", sim_probe, "auto margin covers contacts up to this depth");
  sim->add_option("--seed", sim_seed, "random seed");
  sim->add_option("--out", sim_out, "output CSV path");

  // estimate ---------------------------------------------------------------
  auto* est = app.add_subcommand("estimate", "estimate the radius distribution");
  ModelFlags est_mf;
  est_mf.attach(est);
  std::string est_in, est_method = "weighted", est_gauge = "ball", est_out, est_knots;
  double est_eps = 1.0, est_minus = 0.0, est_h = 1.0 / 300.0;
  uint64_t est_seed = 0;
  double est_margin = -1.0, est_probe = 1.0;
  est->add_option("--in", est_in, "realization CSV (otherwise simulate with the model flags)");
  est->add_option("--method", est_method,
                  "weighted | minus | uncorrected | hanisch | limit-spherical | limit-linear | "
                  "limit-linear-combined");
  est->add_option("--gauge", est_gauge, "ball | segment:+x | segment:-x | segment:+y | segment:-y");
  est->add_option("--epsilon", est_eps, "bandwidth of the indicator weight");
  est->add_option("--minus-eps", est_minus, "erosion depth for the minus-sampling method");
  est->add_option("--grid-h", est_h, "quadrature grid spacing");
  est->add_option("--seed", est_seed, "random seed (inline simulation)");
  est->add_option("--margin", est_margin, "germ margin (negative = auto, inline simulation)");
  est->add_option("--probe-depth", est_probe, "auto margin probe depth (inline simulation)");
  est->add_option("--out", est_out, "output CSV path for the weighted measure");
  est->add_option("--knots", est_knots, "comma separated CDF evaluation knots for the CSV");

  // variance ---------------------------------------------------------------
  auto* var = app.add_subcommand("variance", "asymptotic variance of the contact measure");
  ModelFlags var_mf;
  var_mf.attach(var);
  double var_eps = 0.05, var_clo = 0.0, var_chi = INFINITY;
  int var_points = 16384, var_shifts = 16;
  uint64_t var_seed = 0x5eed0001;
  var->add_option("--band-eps", var_eps, "bandwidth of the indicator weight");
  var->add_option("--c-lo", var_clo, "radius class lower end");
  var->add_option("--c-hi", var_chi, "radius class upper end (inf = all radii)");
  var->add_option("--qmc-points", var_points, "quadrature points per shift");
  var->add_option("--qmc-shifts", var_shifts, "number of randomized shifts");
  var->add_option("--seed", var_seed, "shift seed");

  // table ------------------------------------------------------------------
  auto* tab = app.add_subcommand("table", "replication study across all estimators");
  ModelFlags tab_mf;
  tab_mf.attach(tab);
  std::string tab_config, tab_out = "table.csv", tab_meta;
  int tab_reps = 100;
  double tab_h = 1.0 / 300.0;
  uint64_t tab_seed = 0;
  bool tab_sequential = false;
  tab->add_option("--config", tab_config, "JSON config file (flags override file values)");
  tab->add_option("--reps", tab_reps, "independent replications");
  tab->add_option("--grid-h", tab_h, "quadrature grid spacing");
  tab->add_option("--seed", tab_seed, "base seed; replication r derives its own stream");
  tab->add_flag("--sequential", tab_sequential,
                "run replications strictly in order (results are identical either way)");
  tab->add_option("--out", tab_out, "output CSV path");
  tab->add_option("--meta", tab_meta, "JSON metadata path");

  // validate ---------------------------------------------------------------
  auto* val = app.add_subcommand("validate", "statistical self checks against analytic values");
  ModelFlags val_mf;
  val_mf.attach(val);
  std::string val_config, val_out;
  int val_reps = -1;
  double val_h = 0.0, val_band = 0.0, val_hb = 0.0;
  uint64_t val_seed = 0;
  bool val_seq = false;
  val->add_option("--config", val_config, "JSON config file (flags override file values)");
  val->add_option("--reps", val_reps, "replications per statistical suite (0 skips everything)");
  val->add_option("--grid-h", val_h, "quadrature grid spacing");
  val->add_option("--seed", val_seed, "base seed");
  val->add_option("--band-eps", val_band, "bandwidth of the indicator weight");
  val->add_option("--hb-scale", val_hb, "contact density scale factor (1 = correct density)");
  val->add_flag("--sequential", val_seq,
                "run replications strictly in order (results are identical either way)");
  val->add_option("--out", val_out, "JSON report path");

  CLI11_PARSE(app, argc, argv);

  if (sim->parsed()) {
    Model model;
    if (int rc = make_model(sim_mf, model)) return rc;
    Realization real;
    if (int rc = simulate_into(sim_mf, model, sim_margin, sim_probe, sim_seed, real)) return rc;
    size_t n = 0;
    sphs_realization_count(real.r, &n);
    std::printf("germs: %zu\n", n);
    if (!sim_out.empty()) {
      sphs_status st = sphs_realization_save_csv(real.r, sim_out.c_str());
      if (st != SPHS_OK) return fail(st);
      std::printf("saved %s\n", sim_out.c_str());
    }
    return 0;
  }

  if (est->parsed()) {
    Model model;
    if (int rc = make_model(est_mf, model)) return rc;
    Realization real;
    if (!est_in.empty()) {
      sphs_status st = sphs_realization_load_csv(est_in.c_str(), &real.r);
      if (st != SPHS_OK) return fail(st);
    } else {
      if (int rc = simulate_into(est_mf, model, est_margin, est_probe, est_seed, real)) return rc;
    }
    Measure meas;
    sphs_status st;
    if (est_method == "limit-linear-combined") {
      st = sphs_estimate_limit_linear_combined(real.r, est_h, &meas.m);
    } else {
      st = sphs_estimate(real.r, est_method.c_str(), est_gauge.c_str(), est_eps, est_minus,
                         est_h, &meas.m);
    }
    if (st != SPHS_OK) return fail(st);
    size_t atoms = 0;
    double total = 0.0;
    sphs_measure_size(meas.m, &atoms);
    sphs_measure_total(meas.m, &total);
    std::printf("atoms: %zu\ntotal mass: %.17g\n", atoms, total);
    double ks = 0.0, cvm = 0.0;
    if (sphs_ks_distance(meas.m, model.m, &ks) == SPHS_OK &&
        sphs_cvm_distance(meas.m, model.m, &cvm) == SPHS_OK) {
      std::printf("ks distance: %.6f\ncvm distance: %.8f\n", ks, cvm);
    } else {
      std::printf("distances unavailable: %s\n", sphs_last_error());
    }
    if (!est_out.empty()) {
      std::vector<double> knots;
      if (!est_knots.empty()) {
        std::stringstream ss(est_knots);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
          try {
            knots.push_back(std::stod(tok));
          } catch (...) {
            return fail_msg("bad --knots entry: " + tok);
          }
        }
      }
      st = sphs_measure_save_csv(meas.m, est_out.c_str(), knots.empty() ? nullptr : knots.data(),
                                 knots.size());
      if (st != SPHS_OK) return fail(st);
      std::printf("saved %s\n", est_out.c_str());
    }
    return 0;
  }

  if (var->parsed()) {
    Model model;
    if (int rc = make_model(var_mf, model)) return rc;
    double v = 0, se = 0, t1 = 0, t2 = 0;
    sphs_status st = sphs_sigma2(model.m, var_eps, var_clo, var_chi, var_points, var_shifts,
                                 var_seed, &v, &se, &t1, &t2);
    if (st != SPHS_OK) return fail(st);
    std::printf("sigma2: %.10g (se %.3g)\ntau1: %.10g\ntau2: %.10g\n", v, se, t1, t2);
    if (std::isfinite(var_chi)) {
      double g = 0, gse = 0, alt = 0, altse = 0;
      st = sphs_sigma_g2(model.m, var_eps, var_clo, var_chi, var_points, var_shifts, var_seed,
                         &g, &gse, &alt, &altse);
      if (st != SPHS_OK) return fail(st);
      std::printf("sigma_g2: %.10g (se %.3g)\nsigma_g2 alt: %.10g (se %.3g)\n", g, gse, alt,
                  altse);
    }
    return 0;
  }

  auto overlay_common = [](CLI::App* cmd, const ModelFlags& mf, json& j) {
    if (cmd->count("--gamma")) j["gamma"] = mf.gamma;
    if (cmd->count("--radius-dist")) j["radius"] = mf.radius;
    if (cmd->count("--dim")) j["dim"] = mf.dim;
    if (cmd->count("--window")) {
      std::vector<double> lo, hi;
      if (!parse_window(mf.window, 2, lo, hi)) throw std::runtime_error("bad --window");
      j["window"] = {lo[0], lo[1], hi[0], hi[1]};
    }
  };

  if (tab->parsed()) {
    json j = json::object();
    try {
      overlay_common(tab, tab_mf, j);
    } catch (const std::exception& e) {
      return fail_msg(e.what());
    }
    if (tab->count("--reps")) j["replications"] = tab_reps;
    if (tab->count("--grid-h")) j["grid_h"] = tab_h;
    if (tab->count("--seed")) j["seed"] = tab_seed;
    return run_config_command(tab_config, j, false, tab_out, tab_meta);
  }

  if (val->parsed()) {
    json j = json::object();
    try {
      overlay_common(val, val_mf, j);
    } catch (const std::exception& e) {
      return fail_msg(e.what());
    }
    if (val->count("--reps")) j["replications"] = val_reps;
    if (val->count("--grid-h")) j["grid_h"] = val_h;
    if (val->count("--seed")) j["seed"] = val_seed;
    if (val->count("--band-eps")) j["band_eps"] = val_band;
    if (val->count("--hb-scale")) j["hb_scale"] = val_hb;
    return run_config_command(val_config, j, true, val_out, "");
  }

  return 0;
}
