#ifndef ACLQR_H
#define ACLQR_H

/* C interface to the adaptive LQR library.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every function returning aclqr_status leaves a message for the calling
 * thread in aclqr_last_error() when it fails. Strings returned through
 * char** outputs are heap-allocated and released with aclqr_string_free.
 * Matrices are dense and column-major. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(ACLQR_BUILDING_LIBRARY)
#    define ACLQR_API __declspec(dllexport)
#  else
#    define ACLQR_API __declspec(dllimport)
#  endif
#else
#  define ACLQR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum aclqr_status {
  ACLQR_OK = 0,
  ACLQR_CERTIFICATE_VIOLATION = 1,
  ACLQR_CONFIG_ERROR = 2,
  ACLQR_NUMERICAL_ERROR = 3,
  ACLQR_IO_ERROR = 4,
  ACLQR_INVALID_ARGUMENT = 5
} aclqr_status;

typedef struct aclqr_experiment aclqr_experiment;
typedef struct aclqr_log aclqr_log;
typedef struct aclqr_report aclqr_report;

ACLQR_API const char* aclqr_version(void);

/* Message of the most recent failure on this thread ("" if none). */
ACLQR_API const char* aclqr_last_error(void);

ACLQR_API void aclqr_string_free(char* s);

/* ---- experiments ---- */

ACLQR_API aclqr_status aclqr_experiment_load_file(const char* path, aclqr_experiment** out);
ACLQR_API aclqr_status aclqr_experiment_load_string(const char* text, const char* source_name,
                                                    aclqr_experiment** out);
/* Built-in definitions: "case-a-nonlinear", "case-b-nonlinear",
 * "case-a-linear", "case-b-linear". */
ACLQR_API aclqr_status aclqr_experiment_load_preset(const char* name, aclqr_experiment** out);
ACLQR_API void aclqr_experiment_free(aclqr_experiment* exp);

ACLQR_API aclqr_status aclqr_experiment_set_seed(aclqr_experiment* exp, uint64_t seed);
ACLQR_API aclqr_status aclqr_experiment_dims(const aclqr_experiment* exp, size_t* n, size_t* m,
                                             size_t* p);
/* Hex SHA-256 of the configuration text. */
ACLQR_API aclqr_status aclqr_experiment_hash(const aclqr_experiment* exp, char** out);

/* Simulates the configured closed loop. Divergence is not an error; it is
 * reported by aclqr_log_diverged. */
ACLQR_API aclqr_status aclqr_experiment_run(const aclqr_experiment* exp, aclqr_log** out);

/* Writes <stem>.csv, .report, .meta and .plot.dat into out_dir. */
ACLQR_API aclqr_status aclqr_experiment_write_outputs(const aclqr_experiment* exp,
                                                      const aclqr_log* log,
                                                      const aclqr_report* report,
                                                      const char* out_dir);

/* ---- trajectory logs ---- */

ACLQR_API void aclqr_log_free(aclqr_log* log);
ACLQR_API aclqr_status aclqr_log_read_csv(const char* path, aclqr_log** out);
ACLQR_API aclqr_status aclqr_log_write_csv(const aclqr_log* log, const aclqr_experiment* exp,
                                           const char* path);
ACLQR_API size_t aclqr_log_steps(const aclqr_log* log);
ACLQR_API int aclqr_log_diverged(const aclqr_log* log);
ACLQR_API aclqr_status aclqr_log_dims(const aclqr_log* log, size_t* n, size_t* m, size_t* p);
/* k in [0, steps] for states and parameters, [0, steps) for inputs. */
ACLQR_API aclqr_status aclqr_log_state(const aclqr_log* log, size_t k, double* x);
ACLQR_API aclqr_status aclqr_log_input(const aclqr_log* log, size_t k, double* u);
ACLQR_API aclqr_status aclqr_log_parameter(const aclqr_log* log, size_t k, double* theta);
ACLQR_API aclqr_status aclqr_log_estimate(const aclqr_log* log, size_t k, double* theta_hat);

/* ---- certificates ---- */

/* Evaluates the certificates that apply to the experiment. Returns
 * ACLQR_CERTIFICATE_VIOLATION (with *out still set) when any inequality
 * whose preconditions held is violated beyond `tolerance`. */
ACLQR_API aclqr_status aclqr_certify(const aclqr_experiment* exp, const aclqr_log* log,
                                     double tolerance, aclqr_report** out);
ACLQR_API void aclqr_report_free(aclqr_report* report);
ACLQR_API int aclqr_report_violated(const aclqr_report* report);
ACLQR_API int aclqr_report_bounded(const aclqr_report* report);
ACLQR_API aclqr_status aclqr_report_format(const aclqr_report* report, char** out);
ACLQR_API aclqr_status aclqr_report_write(const aclqr_report* report, const char* path);

/* ---- numerics ---- */

/* Stabilizing DARE solution. A n x n, B n x m, Q n x n, R m x m; P (n x n)
 * and K (m x n) receive the results. */
ACLQR_API aclqr_status aclqr_dare_solve(const double* A, const double* B, const double* Q,
                                        const double* R, size_t n, size_t m, double* P,
                                        double* K, double* residual);

/* Solver and sensitivity self-tests. *out receives one line per check.
 * Returns ACLQR_NUMERICAL_ERROR if any check fails. */
ACLQR_API aclqr_status aclqr_dare_self_check(char** out);

/* Lipschitz estimate of theta -> K(theta) over the experiment's parameter
 * box with grid_per_dim points per axis. threads = 0 uses all cores. */
ACLQR_API aclqr_status aclqr_gain_lipschitz(const aclqr_experiment* exp, int grid_per_dim,
                                            unsigned threads, double* out);

/* The eight reference runs. Writes per-run outputs and summary.tsv into
 * out_dir; *summary (may be NULL) receives the summary table. */
ACLQR_API aclqr_status aclqr_paper_experiments(const char* out_dir, uint64_t seed, int horizon,
                                               double tolerance, unsigned threads,
                                               char** summary);

#ifdef __cplusplus
}
#endif

#endif
