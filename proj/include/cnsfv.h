#ifndef CNSFV_H
#define CNSFV_H

/* C interface to the chemotaxis-fluid finite-volume core.
 *
 * All functions return a cns_status; CNS_OK is 0 and every other value is an
 * error class (the numeric values double as process exit codes for the CLI).
 * On error, cns_last_error() returns a message for the calling thread.
 * Strings handed back through char** parameters are heap-allocated and must
 * be released with cns_free(). Handles are opaque; each *_destroy accepts
 * NULL. Handles are not thread-safe; distinct handles may be used from
 * distinct threads concurrently.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cns_status {
  CNS_OK = 0,
  CNS_ERROR_INVARIANT = 2,        /* runtime guarantee violated              */
  CNS_ERROR_CONFIG = 3,           /* configuration rejected                  */
  CNS_ERROR_SOLVER = 4,           /* iterative solver failed to converge     */
  CNS_ERROR_INVALID_ARGUMENT = 5, /* bad pointer / name / range              */
  CNS_ERROR_IO = 6,               /* file unreadable, unwritable, malformed  */
  CNS_ERROR_INTERNAL = 7          /* unexpected failure                      */
} cns_status;

typedef struct cns_config cns_config; /* a run configuration */
typedef struct cns_sim cns_sim;       /* an advancing simulation */

/* Message for the most recent failure on this thread; "" when none. The
 * pointer stays valid until the next library call on the same thread. */
const char* cns_last_error(void);

const char* cns_version(void);

/* Release a string returned through any char** parameter. NULL is a no-op. */
void cns_free(char* p);

/* ---- configuration ------------------------------------------------------ */

/* Fresh configuration holding the default scenario. Never fails. */
cns_config* cns_config_create(void);

/* Parse a config file / config text (flat "key = value" lines, '#' comments).
 * The parsed config is validated as a whole. */
cns_status cns_config_load(const char* path, cns_config** out);
cns_status cns_config_parse(const char* text, cns_config** out);

/* Assign or read one dotted key ("model.m", "grid.nx", ...). cns_config_set
 * does not cross-validate (incomplete intermediate states are fine); full
 * validation happens when the config is used. */
cns_status cns_config_set(cns_config* cfg, const char* key, const char* value);
cns_status cns_config_get(const cns_config* cfg, const char* key,
                          char** value_out);

cns_status cns_config_serialize(const cns_config* cfg, char** text_out);
cns_status cns_config_save(const cns_config* cfg, const char* path);
void cns_config_destroy(cns_config* cfg);

/* ---- whole-run entry points --------------------------------------------- */

/* Screen the model parameters against the standing hypotheses (diffusion
 * exponent, kinetics shape, chemotactic sensitivity). *pass_out gets 1/0;
 * *report_out (optional) the line-per-check report. Fails only on malformed
 * input, not on a failing screen. */
cns_status cns_validate(const cns_config* cfg, char** report_out,
                        int* pass_out);

/* Advance the configured scenario to its final time, writing diagnostics.csv
 * and snapshots under out_dir (pass NULL to keep the config's out.dir; pass
 * "" to write nothing). *summary_out (optional) gets "key = value" lines. */
cns_status cns_run(const cns_config* cfg, const char* out_dir,
                   char** summary_out);

/* Run the regularization-continuation study: the same scenario across a
 * non-increasing eps sequence (>= 3 values). Per-eps outputs land under
 * out_dir/eps_<i> plus a study table in out_dir/eps_study.csv (out_dir NULL
 * or "" writes nothing). *pass_out gets 1 when the accumulators stay within
 * the bound ratio of their median and consecutive-pair field distances are
 * non-increasing. */
cns_status cns_eps_study(const cns_config* cfg, const double* eps, int n_eps,
                         const char* out_dir, char** report_out,
                         int* pass_out);

/* Grid-refinement order check of the linear sub-cases against the separable
 * series reference (sizes must double, >= 3 of them). Writes mms.csv under
 * out_dir when given. *pass_out gets 1 when both observed orders reach 1.8. */
cns_status cns_mms_study(const int* sizes, int n_sizes, const char* out_dir,
                         char** report_out, int* pass_out);

/* Degenerate-diffusion order check against the self-similar profile (m > 1).
 * Writes barenblatt.csv under out_dir when given. *pass_out gets 1 when the
 * L1 error decreases with order >= 0.8 and mass stays constant. */
cns_status cns_barenblatt_study(double m, const int* sizes, int n_sizes,
                                const char* out_dir, char** report_out,
                                int* pass_out);

/* ---- manual stepping ----------------------------------------------------- */

/* Build the initial state for a validated config. */
cns_status cns_sim_create(const cns_config* cfg, cns_sim** out);

/* One splitting step (fluid, then signal, then density). dt <= 0 selects the
 * automatic policy. */
cns_status cns_sim_step(cns_sim* sim, double dt);

/* Step under the automatic policy until sim time reaches t_target. */
cns_status cns_sim_advance(cns_sim* sim, double t_target);

double cns_sim_time(const cns_sim* sim);

/* Instantaneous scalar by name: "t", "mass", "n_max", "n_min", "c_max",
 * "c_min", "entropy", "psi_energy", "kinetic", "combined_energy",
 * "d1".."d4", "div_inf". */
cns_status cns_sim_get_scalar(const cns_sim* sim, const char* name,
                              double* out);

/* CSV header line for diagnostics rows. Never fails. */
const char* cns_diagnostics_header(void);

/* One diagnostics CSV row for the current state. Successive calls on the same
 * handle extend the time-accumulated columns by the trapezoid rule. */
cns_status cns_sim_diagnostics_csv(cns_sim* sim, char** row_out);

void cns_sim_destroy(cns_sim* sim);

#ifdef __cplusplus
}
#endif

#endif /* CNSFV_H */
