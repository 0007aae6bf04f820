/* C interface to the rdrho library.
 *
 * Every function returning rdrho_status reports failures through the status
 * code; rdrho_last_error() then describes the most recent failure on the
 * calling thread. Handles are opaque and must be released with the matching
 * *_destroy function. Group index 0 is the first group, 1 the second; the
 * risk difference is delta = pi2 - pi1.
 */
#ifndef RDRHO_RDRHO_H
#define RDRHO_RDRHO_H

#include <stddef.h>
#include <stdint.h>

#if defined(RDRHO_BUILDING_LIBRARY)
#define RDRHO_API __attribute__((visibility("default")))
#else
#define RDRHO_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rdrho_status {
  RDRHO_OK = 0,
  RDRHO_ERR_INVALID_ARGUMENT = 1, /* null pointer, bad enum, bad index */
  RDRHO_ERR_PARSE = 2,            /* malformed table input */
  RDRHO_ERR_DOMAIN = 3,           /* parameters or counts outside the model */
  RDRHO_ERR_NONCONVERGENCE = 4,
  RDRHO_ERR_SINGULAR = 5,         /* information matrix not invertible */
  RDRHO_ERR_UNATTAINABLE = 6,     /* sample-size target not reached */
  RDRHO_ERR_INTERNAL = 7
} rdrho_status;

typedef enum rdrho_test { RDRHO_TEST_LR = 0, RDRHO_TEST_WALD = 1, RDRHO_TEST_SCORE = 2 } rdrho_test;

typedef enum rdrho_boundary {
  RDRHO_BOUNDARY_INTERIOR = 0,
  RDRHO_BOUNDARY_PI_CLAMPED = 1,
  RDRHO_BOUNDARY_RHO_CLAMPED = 2
} rdrho_boundary;

typedef enum rdrho_tie_class {
  RDRHO_TIE_ROBUST = 0,
  RDRHO_TIE_LIBERAL = 1,
  RDRHO_TIE_CONSERVATIVE = 2
} rdrho_tie_class;

/* Warning bits of rdrho_report_warnings(). */
#define RDRHO_WARN_BOUNDARY 0x01u
#define RDRHO_WARN_WALD_UNAVAILABLE 0x02u
#define RDRHO_WARN_SCORE_UNAVAILABLE 0x04u
#define RDRHO_WARN_NONCONVERGENCE 0x08u
#define RDRHO_WARN_LR_CLAMPED 0x10u
#define RDRHO_WARN_RHO_NOT_IDENTIFIED 0x20u
#define RDRHO_WARN_SCORE_FORM_MISMATCH 0x40u

RDRHO_API const char* rdrho_version(void);
RDRHO_API const char* rdrho_status_name(rdrho_status status);
/* Message of the last failure on this thread; "" if none. */
RDRHO_API const char* rdrho_last_error(void);

/* ---- frequency tables ---------------------------------------------------- */

/* m[r][g]: bilateral subjects of group g with r cured organs.
 * n[r][g]: unilateral subjects of group g with r cured organs. */
typedef struct rdrho_counts {
  int64_t m[3][2];
  int64_t n[2][2];
} rdrho_counts;

typedef struct rdrho_table rdrho_table;

RDRHO_API rdrho_status rdrho_table_create(const rdrho_counts* counts, rdrho_table** out);
/* Text or JSON table format, auto-detected. */
RDRHO_API rdrho_status rdrho_table_parse(const char* text, size_t length, rdrho_table** out);
RDRHO_API rdrho_status rdrho_table_load(const char* path, rdrho_table** out);
RDRHO_API void rdrho_table_destroy(rdrho_table* table);
RDRHO_API rdrho_status rdrho_table_counts(const rdrho_table* table, rdrho_counts* out);
/* Label of group 0 or 1; NULL for a bad index. Owned by the table. */
RDRHO_API const char* rdrho_table_label(const rdrho_table* table, int group);
RDRHO_API rdrho_status rdrho_table_set_labels(rdrho_table* table, const char* first, const char* second);
/* Canonical text rendering, owned by the table until its next call. */
RDRHO_API const char* rdrho_table_format(rdrho_table* table);

/* ---- fitting and tests --------------------------------------------------- */

typedef struct rdrho_fit_options {
  double tolerance;       /* 1e-6 */
  int max_iterations;     /* 500 */
  double rho_init;        /* 0 */
  int pi_init_custom;     /* 0: pooled proportion, 1: use pi_init */
  double pi_init;         /* 0.5 */
  double score_tolerance; /* 1e-8 */
} rdrho_fit_options;

RDRHO_API void rdrho_fit_options_default(rdrho_fit_options* out);

typedef struct rdrho_fit {
  double delta;
  double pi1;
  double pi2;
  double rho;
  double loglik;
  int iterations;
  int converged;
  int boundary; /* rdrho_boundary */
  int rho_identified;
  double final_step_norm;
} rdrho_fit;

typedef struct rdrho_report rdrho_report;

/* Runs both fits and all three tests of H0: delta = delta0. Succeeds with a
 * partial report when a fit does not converge or the information is
 * singular; see rdrho_report_complete(). opts may be NULL. */
RDRHO_API rdrho_status rdrho_run_tests(const rdrho_table* table, double delta0, const rdrho_fit_options* opts,
                                       rdrho_report** out);
RDRHO_API void rdrho_report_destroy(rdrho_report* report);
RDRHO_API double rdrho_report_delta0(const rdrho_report* report);
RDRHO_API int rdrho_report_complete(const rdrho_report* report);
RDRHO_API rdrho_status rdrho_report_statistic(const rdrho_report* report, rdrho_test test, double* q, double* p,
                                              int* available);
/* Reduced score form I^11 (dl/d delta)^2; equals the reported score statistic at an interior constrained MLE. */
RDRHO_API double rdrho_report_score_reduced(const rdrho_report* report);
RDRHO_API rdrho_status rdrho_report_fit(const rdrho_report* report, int constrained, rdrho_fit* out);
RDRHO_API uint32_t rdrho_report_warnings(const rdrho_report* report);
/* Name of a single warning bit, or NULL. */
RDRHO_API const char* rdrho_warning_name(uint32_t bit);

RDRHO_API const char* rdrho_test_name(rdrho_test test);
RDRHO_API rdrho_status rdrho_parse_test(const char* name, rdrho_test* out);
RDRHO_API rdrho_status rdrho_chisq1_pvalue(double q, double* out);
RDRHO_API int rdrho_rejects(double q, double alpha);

RDRHO_API int rdrho_is_admissible(double pi, double rho);
RDRHO_API double rdrho_rho_lower_bound(double pi);

/* ---- simulation ---------------------------------------------------------- */

typedef struct rdrho_sim_config {
  double pi1;
  double rho;
  double delta_true;
  double delta_null;
  int64_t m1, m2, n1, n2;
  int64_t replicates;
  double alpha;
  uint64_t seed;
} rdrho_sim_config;

RDRHO_API void rdrho_sim_config_default(rdrho_sim_config* out);

typedef struct rdrho_test_tally {
  int64_t rejections;
  int64_t valid;
  int64_t nonconverged;
  double rate;
  double std_error;
} rdrho_test_tally;

typedef struct rdrho_sim_summary {
  rdrho_test_tally tests[3]; /* indexed by rdrho_test */
  int classified;
  int classification[3]; /* rdrho_tie_class, TIE runs only */
} rdrho_sim_summary;

/* workers = 0 uses every hardware thread; results never depend on it. */
RDRHO_API rdrho_status rdrho_estimate_tie(const rdrho_sim_config* config, unsigned workers, rdrho_sim_summary* out);
RDRHO_API rdrho_status rdrho_estimate_power(const rdrho_sim_config* config, unsigned workers,
                                            rdrho_sim_summary* out);
RDRHO_API const char* rdrho_tie_class_name(int tie_class);

typedef struct rdrho_samplesize_query {
  double rho;
  double pi1;
  double delta1;
  double target_power;
  double alpha;
  int test; /* rdrho_test */
  int64_t replicates;
  uint64_t seed;
  int64_t max_size;
} rdrho_samplesize_query;

typedef struct rdrho_samplesize_result {
  int64_t size;
  double power;
  int64_t search_replicates;
  int64_t confirm_replicates;
} rdrho_samplesize_result;

RDRHO_API void rdrho_samplesize_query_default(rdrho_samplesize_query* out);
RDRHO_API rdrho_status rdrho_min_sample_size(const rdrho_samplesize_query* query, unsigned workers,
                                             rdrho_samplesize_result* out);

typedef struct rdrho_exact_size {
  double size[3];
  double rejection_mass[3];
  double valid_mass[3];
  double total_probability;
  int64_t tables;
} rdrho_exact_size;

RDRHO_API rdrho_status rdrho_exact_tie_small(const rdrho_sim_config* config, unsigned workers,
                                             rdrho_exact_size* out);

typedef struct rdrho_sweep_ranges {
  double delta_lo, delta_hi;
  double rho_lo, rho_hi;
  double pi1_lo, pi1_hi;
  int64_t size_lo, size_hi;
} rdrho_sweep_ranges;

typedef struct rdrho_sweep rdrho_sweep;

RDRHO_API void rdrho_sweep_ranges_default(rdrho_sweep_ranges* out);
/* ranges may be NULL for the defaults. */
RDRHO_API rdrho_status rdrho_sweep_run(int64_t count, const rdrho_sweep_ranges* ranges, int64_t replicates,
                                       double alpha, uint64_t seed, unsigned workers, rdrho_sweep** out);
RDRHO_API void rdrho_sweep_destroy(rdrho_sweep* sweep);
RDRHO_API size_t rdrho_sweep_size(const rdrho_sweep* sweep);
RDRHO_API rdrho_status rdrho_sweep_entry(const rdrho_sweep* sweep, size_t index, rdrho_sim_config* config,
                                         rdrho_sim_summary* summary);
/* CSV with a header row, owned by the sweep. */
RDRHO_API const char* rdrho_sweep_csv(const rdrho_sweep* sweep);
RDRHO_API rdrho_status rdrho_sweep_distribution(const rdrho_sweep* sweep, rdrho_test test, double* q1,
                                                double* median, double* q3);

#ifdef __cplusplus
}
#endif

#endif
