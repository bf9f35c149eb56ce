#ifndef LRLAB_H
#define LRLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(LRLAB_BUILDING)
#    define LRLAB_API __declspec(dllexport)
#  else
#    define LRLAB_API __declspec(dllimport)
#  endif
#else
#  define LRLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lrlab_status {
    LRLAB_OK = 0,
    LRLAB_ERR_VALIDATION = 1,
    LRLAB_ERR_NUMERICAL = 2,
    LRLAB_ERR_BOUND_VIOLATION = 3,
    LRLAB_ERR_IO = 4,
    LRLAB_ERR_INTERNAL = 5
} lrlab_status;

typedef struct lrlab_config lrlab_config;
typedef struct lrlab_hamiltonian lrlab_hamiltonian;
typedef struct lrlab_certificate lrlab_certificate;
typedef struct lrlab_audit lrlab_audit;
typedef struct lrlab_spread lrlab_spread;

LRLAB_API const char* lrlab_version(void);

/* Message of the last failed call on this thread; "" if none. */
LRLAB_API const char* lrlab_last_error(void);

/* Frees strings returned through char** out-parameters. */
LRLAB_API void lrlab_string_free(char* s);

/* ---- configuration ---- */

LRLAB_API lrlab_status lrlab_config_default(lrlab_config** out);
LRLAB_API lrlab_status lrlab_config_parse(const char* json_text, lrlab_config** out);
LRLAB_API lrlab_status lrlab_config_load(const char* path, lrlab_config** out);
LRLAB_API void lrlab_config_free(lrlab_config* c);

/* Keys: "threshold", "mu", "integrator_tol". */
LRLAB_API lrlab_status lrlab_config_set_double(lrlab_config* c, const char* key, double value);
/* Keys: "grid_points", "seed", "optimize", "fixed_basis". */
LRLAB_API lrlab_status lrlab_config_set_int(lrlab_config* c, const char* key, int64_t value);
/* Keys: "output_dir". */
LRLAB_API lrlab_status lrlab_config_set_string(lrlab_config* c, const char* key, const char* value);
LRLAB_API lrlab_status lrlab_config_set_t_values(lrlab_config* c, const double* values, size_t count);
LRLAB_API lrlab_status lrlab_config_t_values(const lrlab_config* c, const double** values, size_t* count);

/* ---- Hamiltonians ---- */

/* Builds the configured model for total time T. */
LRLAB_API lrlab_status lrlab_hamiltonian_create(const lrlab_config* c, double total_time, lrlab_hamiltonian** out);
/* Row-major n x n matrix given as 2 n^2 doubles (re, im interleaved). */
LRLAB_API lrlab_status lrlab_hamiltonian_constant(const double* re_im, size_t n, lrlab_hamiltonian** out);
LRLAB_API lrlab_status lrlab_hamiltonian_linear(const double* h_i, const double* h_f, size_t n, double total_time,
                                                lrlab_hamiltonian** out);
LRLAB_API void lrlab_hamiltonian_free(lrlab_hamiltonian* h);
LRLAB_API lrlab_status lrlab_hamiltonian_dimension(const lrlab_hamiltonian* h, size_t* out);
/* 0 for time-independent models. */
LRLAB_API lrlab_status lrlab_hamiltonian_total_time(const lrlab_hamiltonian* h, double* out);
/* Writes H(t) as 2 n^2 doubles into buffer (capacity in doubles). */
LRLAB_API lrlab_status lrlab_hamiltonian_evaluate(const lrlab_hamiltonian* h, double t, double* buffer,
                                                  size_t capacity);

/* Pairwise block decomposition statistics of H(t) as JSON. */
LRLAB_API lrlab_status lrlab_decompose(const lrlab_hamiltonian* h, double t, double mu, char** json_out);

/* ---- locality certificates ---- */

/* t_final <= 0 selects T for scheduled models and 5 / a_mu for constant ones. */
LRLAB_API lrlab_status lrlab_certify(const lrlab_hamiltonian* h, double mu, double t_final, size_t grid_points,
                                     lrlab_certificate** out);
/* Minimizes v_lr over mu in [mu_lo, mu_hi]. */
LRLAB_API lrlab_status lrlab_certify_optimal(const lrlab_hamiltonian* h, double mu_lo, double mu_hi, double t_final,
                                             size_t grid_points, lrlab_certificate** out);
LRLAB_API void lrlab_certificate_free(lrlab_certificate* c);
LRLAB_API lrlab_status lrlab_certificate_values(const lrlab_certificate* c, double* mu, double* a_mu_max,
                                                double* a_mu_timeavg, double* v_lr);
LRLAB_API lrlab_status lrlab_certificate_json(const lrlab_certificate* c, char** json_out);

/* ---- bound audits ---- */

/* Projector audit on the certificate grid. Supports are label arrays. */
LRLAB_API lrlab_status lrlab_bound_audit(const lrlab_hamiltonian* h, const lrlab_certificate* c,
                                         const size_t* supp_a, size_t count_a, const size_t* supp_b, size_t count_b,
                                         double violation_tol, lrlab_audit** out);
LRLAB_API void lrlab_audit_free(lrlab_audit* a);
LRLAB_API lrlab_status lrlab_audit_result(const lrlab_audit* a, size_t* violations, double* min_margin);
LRLAB_API lrlab_status lrlab_audit_csv(const lrlab_audit* a, char** csv_out);
LRLAB_API lrlab_status lrlab_audit_summary_json(const lrlab_audit* a, char** json_out);

LRLAB_API lrlab_status lrlab_spread_compute(const lrlab_hamiltonian* h, const lrlab_certificate* c, size_t source,
                                            double tol, double violation_tol, lrlab_spread** out);
LRLAB_API void lrlab_spread_free(lrlab_spread* s);
LRLAB_API lrlab_status lrlab_spread_result(const lrlab_spread* s, size_t* checked, size_t* violations,
                                           double* min_margin);
LRLAB_API lrlab_status lrlab_spread_csv(const lrlab_spread* s, char** csv_out);
LRLAB_API lrlab_status lrlab_spread_svg(const lrlab_spread* s, char** svg_out);

/* ---- adiabatic pipeline ---- */

/* Run summary for one total time as JSON. */
LRLAB_API lrlab_status lrlab_adiabatic_summary(const lrlab_config* c, double total_time, char** json_out);

/* Runs every configured T and writes the output files. The report JSON holds
   records, failures, warnings and files. Per-T failures do not change the
   status; inspect "failures". */
LRLAB_API lrlab_status lrlab_figure1(const lrlab_config* c, char** report_json_out);

/* ---- closed forms ---- */

LRLAB_API lrlab_status lrlab_lambert_w(double x, double* out);
LRLAB_API lrlab_status lrlab_optimal_mu_exp_local(double h, double mu_prime, double* mu_min, double* v_lr_min);

#ifdef __cplusplus
}
#endif

#endif
