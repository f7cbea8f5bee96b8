/* C interface to the wlexit library.
 *
 * All entry points return an error code and report details through a
 * caller-supplied message buffer (always NUL-terminated, may be truncated):
 *   WLX_OK       success
 *   WLX_RUNTIME  I/O failures, non-converged quadrature, step caps, ...
 *   WLX_INVALID  malformed configuration or arguments
 *
 * Experiment and fit entry points take a JSON configuration string; the same
 * schema is echoed under "config" in every run manifest, and a manifest is
 * accepted wherever a config is (the embedded config is used), so a run can
 * be reproduced from its own manifest.
 */
#ifndef WLEXIT_CAPI_H
#define WLEXIT_CAPI_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define WLX_OK 0
#define WLX_RUNTIME 1
#define WLX_INVALID 2

/* Library version, e.g. "0.1.0". */
const char* wlx_version(void);

/* Runs a replica-farm exit-time experiment (toy three-state model or the 2D
 * double-well landscape, per the "model" field) and writes raw.csv,
 * summary.csv and manifest.json into the configured output directory.
 *
 * Config keys: model ("toy"|"landscape2d"), grid (array of eps or beta),
 * alpha, gamma_star, update ("nonlinear"|"linearized"), replicas, seed,
 * step_cap, out, and for the landscape R, d, upsilon; optional successive=k
 * switches to the successive-crossing experiment. */
int wlx_run_exit_experiment(const char* config_json, char* errbuf,
                            int errbuf_len);

/* Fits a scaling law to a summary.csv written by wlx_run_exit_experiment.
 * Config keys: in (path), kind ("exp-beta"|"power-beta"|"power-logeps"),
 * optional expected, min_x, k (crossing index for successive summaries),
 * transform ("inv-eps"|"loglog-eps", power-logeps only), out (path for the
 * report JSON). The report JSON is also written to out_json. */
int wlx_fit_summary(const char* config_json, char* out_json, int out_json_len,
                    char* errbuf, int errbuf_len);

/* Renders a fit-report JSON (one object or an array) as an aligned table. */
int wlx_fit_render_text(const char* report_json, char* out_text,
                        int out_text_len, char* errbuf, int errbuf_len);

/* Computes per-stratum weights of exp(-beta U) by deterministic quadrature
 * and writes a CSV with columns stratum,a_lo,a_hi,theta_star,free_energy,
 * where free_energy = -log(theta_star)/beta is the per-stratum profile whose
 * negative, added to U, flattens the landscape. Config keys: beta, R, d,
 * x2_lo, x2_hi, resolution (grid points per unit length), tol, out. */
int wlx_theta_star_table(const char* config_json, char* errbuf, int errbuf_len);

/* ---- handle-based toy-model simulator ---------------------------------- */

typedef struct wlx_toy_sim wlx_toy_sim;

/* update_rule is "nonlinear" or "linearized"; gamma_star = 0 gives the plain
 * Metropolis chain. The handle owns its random stream. */
int wlx_toy_sim_create(double epsilon, double gamma_star, double alpha,
                       const char* update_rule, uint64_t seed,
                       uint64_t step_cap, wlx_toy_sim** out_sim, char* errbuf,
                       int errbuf_len);

/* Samples one first-passage time from the left metastable state to the right
 * one; *capped is set when the step cap fired. Fresh weights every call. */
int wlx_toy_sim_sample_exit(wlx_toy_sim* sim, uint64_t* exit_steps,
                            int* capped, char* errbuf, int errbuf_len);

void wlx_toy_sim_destroy(wlx_toy_sim* sim);

/* ---- small stateless helpers ------------------------------------------- */

/* ln of the step-size product Xi_n = prod_{k<=n} (1 + gamma_star k^-alpha). */
int wlx_log_xi(double gamma_star, double alpha, uint64_t n, double* out,
               char* errbuf, int errbuf_len);

/* Closed-form mean first-passage time 6/eps + 3 of the non-adaptive chain. */
int wlx_toy_expected_exit(double epsilon, double* out, char* errbuf,
                          int errbuf_len);

#ifdef __cplusplus
}
#endif

#endif /* WLEXIT_CAPI_H */
