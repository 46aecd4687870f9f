#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "boolean_model.hpp"
#include "empty_space.hpp"
#include "estimators.hpp"
#include "measure.hpp"

namespace sphstat {

// One estimator row of the comparison table. `limit` selects the
// vanishing-bandwidth estimator (arc based); epsilon is then ignored.
struct TableRow {
  Method method = Method::Weighted;
  bool limit = false;
  double epsilon = 1.0;
};

std::vector<TableRow> standard_rows();

struct ExperimentConfig {
  ModelParams params{25.0, RadiusLaw::uniform(0.05, 0.1), 2};
  Window window = Window::box2(0.0, 0.0, 1.0, 1.0);
  double grid_h = 1.0 / 300.0;
  int replications = 100;
  std::uint64_t seed = 0x7ab1e001ULL;
  std::vector<TableRow> rows;     // empty selects standard_rows()
  std::vector<double> cdf_knots;  // extra CDF evaluation points for CSV output

  static ExperimentConfig from_json(const std::string& text);
  std::string canonical() const;      // stable one-line form, hashed into outputs
  std::uint64_t config_hash() const;  // FNV-1a over canonical()
  void validate() const;
};

struct TableCell {
  double mean = 0.0;
  double se = 0.0;
};

struct TableResultRow {
  TableRow row;
  // [gauge][metric]: gauge 0 spherical, 1 linear; metric 0 d_KS, 1 1000 d_CvM
  TableCell cell[2][2];
};

struct TableResult {
  std::vector<TableResultRow> rows;
  int replications = 0;
  int aborted = 0;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
};

// Replicated estimator comparison: per replication one shared realization,
// every row evaluated for the spherical and the combined four-direction
// linear gauge, Kolmogorov-Smirnov and Cramer-von Mises distances against
// the model's radius law averaged over replications.
TableResult run_table_experiment(const ExperimentConfig& cfg);

// Per-replication estimator measures for one realization, fused over a single
// lattice sweep. Row order matches `rows`; linear results come per direction
// (+e1, -e1, +e2, -e2). Exposed so the fused sweep can be checked against the
// one-row-at-a-time evaluation.
struct FusedEstimates {
  std::vector<WeightedRadiusMeasure> spherical;       // [row]
  std::vector<WeightedRadiusMeasure> directional[4];  // [dir][row]
};
FusedEstimates fused_table_pass(const Realization& r, const GridIndex& idx, const Window& W,
                                const std::vector<TableRow>& rows, double grid_h);

void write_table_csv(const TableResult& t, const std::string& path);
std::string table_meta_json(const ExperimentConfig& cfg, const TableResult& t);

// Monte Carlo evaluation of the single-grain weight identity: |box| times the
// mean of f(d)/h over uniform sample points equals int f dt.
struct IdentityCheck {
  double estimate = 0.0;
  double se = 0.0;
  double analytic = 0.0;
  int samples = 0;
};
IdentityCheck weight_identity_check(const GaugeBody& B, double grain_radius,
                                    const WeightFunction& f, int samples, std::uint64_t seed);

struct ValidationConfig {
  ModelParams params{25.0, RadiusLaw::uniform(0.05, 0.1), 2};
  Window window = Window::box2(0.0, 0.0, 1.0, 1.0);
  double grid_h = 1.0 / 150.0;
  int replications = 200;       // unbiasedness / structural replications
  std::uint64_t seed = 0x5eedca11ULL;
  double band_eps = 0.05;
  double hb_scale = 1.0;        // mutation hook: scales the contact density
  int bounds_samples = 10000;   // analytic two-point bound checks
  int bounds_mc_triples = 3;    // empirical two-point survival spot checks
  int bounds_mc_reps = 3000;
  std::vector<double> variance_n;  // window half-sides for the variance curve
  int variance_reps = 150;
  double clt_n = 2.0;
  int clt_reps = 200;
  int qmc_points = 16384;
  int qmc_shifts = 16;

  static ValidationConfig from_json(const std::string& text);
  void validate() const;
};

struct SuiteResult {
  std::string name;
  std::string status;  // "pass" | "fail" | "skipped"
  std::string detail;
};

struct ValidationReport {
  std::vector<SuiteResult> suites;
  int overall = 0;  // 0 pass, 1 fail, 2 skipped
  std::string json;
};

ValidationReport run_validation_suite(const ValidationConfig& cfg);

// Mean-mass consistency check of the weighted estimator over fixed radius
// classes; exposed on its own so the gate can be exercised directly.
SuiteResult unbiasedness_suite(const ValidationConfig& cfg);

}  // namespace sphstat
