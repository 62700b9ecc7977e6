/* C interface to the circstein library.
 *
 * Every function returns a cs_status; on failure cs_last_error() describes
 * the problem (thread-local, valid until the next call on that thread).
 * A grid size of 0 selects the default of 4096 nodes. Angles are radians. */
#ifndef CIRCSTEIN_H
#define CIRCSTEIN_H

#include <stddef.h>
#include <stdint.h>

#if defined(CIRCSTEIN_BUILDING_LIBRARY)
#define CS_API __attribute__((visibility("default")))
#else
#define CS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  CS_OK = 0,
  CS_ERR_INVALID_ARGUMENT = 1, /* bad family name, parameter or JSON */
  CS_ERR_DOMAIN = 2,           /* argument outside a function's domain */
  CS_ERR_NUMERIC = 3,          /* non-finite value, failed convergence */
  CS_ERR_CONTRACT = 4,         /* precondition of a Stein construction violated */
  CS_ERR_INTERNAL = 5
} cs_status;

typedef struct cs_distribution cs_distribution;
typedef struct cs_bound_report cs_bound_report;

CS_API const char* cs_version(void);
CS_API const char* cs_last_error(void);
CS_API const char* cs_status_name(cs_status status);

/* Distributions. family: uniform, von_mises (vm), bingham (bing), cardioid,
 * wrapped_normal (wn), wrapped_cauchy (wc). */
CS_API cs_status cs_distribution_create(const char* family, double location, double concentration,
                                        cs_distribution** out);
CS_API cs_status cs_distribution_from_json(const char* json, cs_distribution** out);
CS_API void cs_distribution_destroy(cs_distribution* dist);

/* Copies a NUL-terminated string into buf when it fits; *needed always
 * receives the size including the terminator. */
CS_API cs_status cs_distribution_to_json(const cs_distribution* dist, char* buf, size_t capacity,
                                         size_t* needed);
CS_API cs_status cs_distribution_describe(const cs_distribution* dist, char* buf, size_t capacity,
                                          size_t* needed);

CS_API cs_status cs_density(const cs_distribution* dist, double theta, double* out);
CS_API cs_status cs_score(const cs_distribution* dist, double theta, double* out);
CS_API cs_status cs_cdf(const cs_distribution* dist, double theta, size_t grid_size, double* out);
CS_API cs_status cs_mean_angle(const cs_distribution* dist, size_t grid_size, double* angle,
                               double* resultant_length, int* degenerate);
CS_API cs_status cs_sample(const cs_distribution* dist, size_t n, uint64_t seed, size_t grid_size,
                           double* out);

/* Kernels, read in the law's mean-angle frame. */
typedef struct {
  double theta;
  double tau_classical;
  double tau_circular_closed; /* NaN when the family has no closed form */
  double tau_circular_numeric;
} cs_kernel_row;

CS_API cs_status cs_kernel_table(const cs_distribution* dist, size_t grid_size, const double* thetas,
                                 size_t count, cs_kernel_row* rows);
CS_API cs_status cs_alpha(const cs_distribution* dist, size_t grid_size, double x, double* alpha,
                          double* alpha_sin);

/* Bounds on d_W(target, base). */
typedef struct {
  double lower;
  double lower_via_sin;
  double upper;
  double upper_target_form;
  double oracle_w1; /* valid when has_oracle */
  int has_oracle;
  double envelope; /* valid when has_envelope */
  int has_envelope;
  size_t grid_size;
  double frame;
} cs_bound_values;

CS_API cs_status cs_sandwich_bounds(const cs_distribution* base, const cs_distribution* target,
                                    size_t grid_size, int with_oracle, cs_bound_report** out);
CS_API cs_status cs_bound_report_values(const cs_bound_report* report, cs_bound_values* out);
CS_API cs_status cs_bound_report_json(const cs_bound_report* report, char* buf, size_t capacity,
                                      size_t* needed);
CS_API void cs_bound_report_destroy(cs_bound_report* report);

CS_API cs_status cs_envelope_vm_bingham(double kappa, double zeta, double* out);
CS_API cs_status cs_envelope_vm_wn(double kappa, double sigma2, double* out);
CS_API cs_status cs_envelope_wn_wc(double sigma2, double gamma, double* out);

/* Wasserstein-1 oracle. */
typedef struct {
  double value;
  double c_star;
  size_t grid_size;
  double grid_search_value; /* valid when has_grid_search */
  int has_grid_search;
} cs_w1_result;

CS_API cs_status cs_circular_w1(const cs_distribution* p, const cs_distribution* q, size_t grid_size,
                                int verify_shift, cs_w1_result* out);
CS_API cs_status cs_empirical_w1(const cs_distribution* p, const cs_distribution* q, size_t n,
                                 uint64_t seed, size_t replicates, size_t grid_size, double* estimate,
                                 double* std_error);

/* Posterior comparison for von Mises data with known concentration. */
typedef struct {
  size_t n;
  double psi;
  double kappa_R;
  double psi_star;
  double R_star;
  double envelope;
  double oracle_w1;
} cs_bayes_row;

CS_API cs_status cs_bayes_experiment(const cs_distribution* data_law, const size_t* sizes, size_t count,
                                     double kappa, double kappa_star, uint64_t seed, size_t grid_size,
                                     cs_bayes_row* rows);

/* Acceptance suite. The callback fires once per check, in order. */
typedef void (*cs_criterion_callback)(int id, const char* name, int passed, const char* detail,
                                      double seconds, void* user);
CS_API cs_status cs_selftest(cs_criterion_callback callback, void* user, int* failures);

#ifdef __cplusplus
}
#endif

#endif
