/* spherestats: Boolean models with spherical grains. Simulation,
 * radius-distribution estimation, and asymptotic variance evaluation.
 *
 * All functions return sphs_status; outputs go through pointers. Handles are
 * opaque and freed with their matching _free function. Error details for the
 * calling thread are available via sphs_last_error().
 */
#ifndef SPHERESTATS_H
#define SPHERESTATS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SPHS_API __declspec(dllexport)
#else
#define SPHS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sphs_status {
  SPHS_OK = 0,
  SPHS_E_INVALID = 1,      /* bad argument or configuration */
  SPHS_E_UNSUPPORTED = 2,  /* valid request outside the implemented range */
  SPHS_E_NUMERIC = 3,      /* numeric failure or violated invariant */
  SPHS_E_IO = 4,           /* file i/o failure */
  SPHS_E_MARGIN = 5,       /* query not certifiable within the simulated region */
  SPHS_E_VALIDATION = 6,   /* validation suite reported failures */
  SPHS_E_INTERNAL = 7
} sphs_status;

typedef struct sphs_model sphs_model;
typedef struct sphs_realization sphs_realization;
typedef struct sphs_measure sphs_measure;

/* Version string of the library. */
SPHS_API const char* sphs_version(void);

/* Thread-local message for the most recent failing call. */
SPHS_API const char* sphs_last_error(void);

/* ------------------------------------------------------------------ model */

/* radius_spec: "uniform:a:b" | "exp:rate" | "det:r0" */
SPHS_API sphs_status sphs_model_new(double gamma, const char* radius_spec, int dim,
                                    sphs_model** out);
SPHS_API void sphs_model_free(sphs_model* m);

/* kth raw moment of the radius law */
SPHS_API sphs_status sphs_model_radius_moment(const sphs_model* m, int k, double* out);

/* gauge_spec: "ball" | "segment:+x" | "segment:-x" | "segment:+y" | "segment:-y" */

/* Contact distribution F_B(t) of the vacant phase. */
SPHS_API sphs_status sphs_empty_space_F(const sphs_model* m, const char* gauge_spec, double t,
                                        double* out);

/* Decay constant c with 1 - F_B(t) <= exp(-4 c t). */
SPHS_API sphs_status sphs_decay_constant(const sphs_model* m, const char* gauge_spec,
                                         double* out);

/* beta = int f (1-F_B); weight_spec: "band:eps" */
SPHS_API sphs_status sphs_beta_constant(const sphs_model* m, const char* gauge_spec,
                                        const char* weight_spec, double* out);

/* Two-point vacancy survival at separation dist (unit-ball gauge). */
SPHS_API sphs_status sphs_second_order_survival(const sphs_model* m, double dist, double t1,
                                                double t2, double* out);

/* ------------------------------------------------------- realizations */

/* window: lo[dim], hi[dim]. margin < 0 selects rcap + probe_depth. */
SPHS_API sphs_status sphs_simulate(const sphs_model* m, const double* win_lo,
                                   const double* win_hi, double margin, double probe_depth,
                                   uint64_t seed, sphs_realization** out);
SPHS_API void sphs_realization_free(sphs_realization* r);
SPHS_API sphs_status sphs_realization_count(const sphs_realization* r, size_t* out);
SPHS_API sphs_status sphs_realization_save_csv(const sphs_realization* r, const char* path);
SPHS_API sphs_status sphs_realization_load_csv(const char* path, sphs_realization** out);

/* Gauge contact distance from point x; cutoff < 0 means unbounded.
 * germ is -1 and distance +inf when nothing lies within the cutoff. */
SPHS_API sphs_status sphs_contact(const sphs_realization* r, const char* gauge_spec,
                                  const double* x, double cutoff, double* distance,
                                  double* grain_radius, int64_t* germ);

/* ------------------------------------------------------- estimation */

/* method: "weighted" | "minus" | "uncorrected" | "hanisch" (grid methods,
 * epsilon = weight bandwidth, minus_eps = erosion depth for "minus"),
 * or "limit-spherical" | "limit-linear" (epsilon ignored).
 * For "limit-linear" gauge_spec selects the direction ("segment:+x" etc). */
SPHS_API sphs_status sphs_estimate(const sphs_realization* r, const char* method,
                                   const char* gauge_spec, double epsilon, double minus_eps,
                                   double grid_h, sphs_measure** out);

/* Four-direction combination of the directional limit estimator, returned as
 * an averaged distribution function (atoms carry the averaged cdf). */
SPHS_API sphs_status sphs_estimate_limit_linear_combined(const sphs_realization* r,
                                                         double grid_h, sphs_measure** out);

SPHS_API void sphs_measure_free(sphs_measure* m);
SPHS_API sphs_status sphs_measure_size(const sphs_measure* m, size_t* out);
SPHS_API sphs_status sphs_measure_total(const sphs_measure* m, double* out);
SPHS_API sphs_status sphs_measure_atoms(const sphs_measure* m, double* radii, double* weights,
                                        size_t capacity);
/* Normalized distribution function at s; NaN for a null measure. */
SPHS_API sphs_status sphs_measure_cdf(const sphs_measure* m, double s, double* out);
/* Ratio estimate of G([lo, hi]); NaN for a null measure (0/0). */
SPHS_API sphs_status sphs_measure_ratio(const sphs_measure* m, double lo, double hi,
                                        double* out);
SPHS_API sphs_status sphs_measure_save_csv(const sphs_measure* m, const char* path,
                                           const double* cdf_knots, size_t n_knots);

/* Discrepancies between the estimate and the model's radius law. */
SPHS_API sphs_status sphs_ks_distance(const sphs_measure* m, const sphs_model* model,
                                      double* out);
SPHS_API sphs_status sphs_cvm_distance(const sphs_measure* m, const sphs_model* model,
                                       double* out);

/* ------------------------------------------------------- variance */

/* Asymptotic per-volume variance of the weighted contact measure of the
 * radius class [c_lo, c_hi] (band weight, unit-ball gauge). */
SPHS_API sphs_status sphs_sigma2(const sphs_model* m, double band_eps, double c_lo,
                                 double c_hi, int qmc_points, int qmc_shifts, uint64_t seed,
                                 double* value, double* se, double* tau1, double* tau2);

/* Asymptotic variance of the ratio estimate of G([c_lo, c_hi]); alt_* is the
 * independent centered-weight evaluation of the same quantity. */
SPHS_API sphs_status sphs_sigma_g2(const sphs_model* m, double band_eps, double c_lo,
                                   double c_hi, int qmc_points, int qmc_shifts, uint64_t seed,
                                   double* value, double* se, double* alt_value,
                                   double* alt_se);

/* ------------------------------------------------------- campaigns */

/* config_json describes the experiment (see docs/output_schema.md).
 * Writes the table CSV and a JSON metadata file. */
SPHS_API sphs_status sphs_run_table(const char* config_json, const char* out_csv,
                                    const char* out_meta_json);

/* Runs the validation suites; writes a JSON report. overall: 0 = pass,
 * 1 = fail, 2 = skipped (no replications requested). */
SPHS_API sphs_status sphs_run_validation(const char* config_json, const char* out_json,
                                         int* overall);

#ifdef __cplusplus
}
#endif

#endif /* SPHERESTATS_H */
