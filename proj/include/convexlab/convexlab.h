#ifndef CONVEXLAB_CONVEXLAB_H_
#define CONVEXLAB_CONVEXLAB_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define CVX_API __declspec(dllexport)
#else
#define CVX_API __attribute__((visibility("default")))
#endif

typedef enum cvx_status {
  CVX_OK = 0,
  CVX_INVALID_ARGUMENT = 1,
  CVX_PARSE = 2,
  CVX_DEGENERATE_NODES = 3,
  CVX_ILL_CONDITIONED = 4,
  CVX_INVALID_ORDER = 5,
  CVX_INVALID_N = 6,
  CVX_NOT_CONVEX_INPUT = 7,
  CVX_NO_CONVEXITY_THRESHOLD = 8,
  CVX_PARTITION_TOO_COARSE = 9,
  CVX_N_BELOW_THRESHOLD = 10,
  CVX_NOT_CONVEX_OUTPUT = 11,
  CVX_MISMATCHED_INPUTS = 12,
  CVX_IO = 13,
  CVX_INTERNAL = 14
} cvx_status;

CVX_API const char* cvx_status_name(cvx_status status);

/* Message and numeric payload of the last failure on the calling thread.
   The payload is the admissible width H for CVX_PARTITION_TOO_COARSE and the
   threshold N for CVX_N_BELOW_THRESHOLD, 0 otherwise. */
CVX_API const char* cvx_last_error_message(void);
CVX_API double cvx_last_error_payload(void);

/* Strings returned through char** are owned by the caller. */
CVX_API void cvx_string_free(char* s);

/* Oracles */

typedef struct cvx_oracle cvx_oracle;

/* "exp:alpha=1", "cosh:beta=1", "pow:m=2", "poly:coeffs=0,0,1", "f0:r=2",
   "truncpow:r=1,eps=0.01". */
CVX_API cvx_status cvx_oracle_parse(const char* spec, cvx_oracle** out);
CVX_API void cvx_oracle_free(cvx_oracle* f);
CVX_API int cvx_oracle_smoothness(const cvx_oracle* f);
CVX_API cvx_status cvx_oracle_eval(const cvx_oracle* f, int order, double x, double* out);

/* Construction */

typedef struct cvx_glue_config {
  double c0;
  double h_max;
} cvx_glue_config;

CVX_API void cvx_glue_config_default(cvx_glue_config* config);

typedef struct cvx_glue_trace {
  double M;
  double x_star;
  double H1;
  double H;
  double delta;
  double delta_tilde;
  double delta_hat;
  int gluing_case;
  double lambda;
  double c0_used;
  int affine;
} cvx_glue_trace;

typedef struct cvx_spline cvx_spline;

/* A NULL config selects the defaults. */
CVX_API cvx_status cvx_chebyshev_threshold(const cvx_oracle* f, int r,
                                           const cvx_glue_config* config, int* out);
CVX_API cvx_status cvx_approximate_chebyshev(const cvx_oracle* f, int r, int n,
                                             const cvx_glue_config* config, cvx_spline** out);
CVX_API cvx_status cvx_approximate_partition(const cvx_oracle* f, int r, const double* knots,
                                             size_t knot_count, const cvx_glue_config* config,
                                             cvx_spline** out);
/* Knots read from a text file, one per line. */
CVX_API cvx_status cvx_approximate_partition_file(const cvx_oracle* f, int r, const char* path,
                                                  const cvx_glue_config* config,
                                                  cvx_spline** out);
CVX_API cvx_status cvx_polygonal_baseline(const cvx_oracle* f, int n, cvx_spline** out);
CVX_API void cvx_spline_free(cvx_spline* s);

CVX_API int cvx_spline_intervals(const cvx_spline* s);
CVX_API int cvx_spline_order(const cvx_spline* s);
CVX_API int cvx_spline_convex_certified(const cvx_spline* s);

typedef struct cvx_spline_info {
  int has_meta;
  int r;
  int n;
  int n_threshold; /* 0 for general partitions */
  double max_grid_error; /* largest |f - s| on 4097 uniform points */
  int reproduction; /* max_grid_error <= 1e-9 max |f| */
} cvx_spline_info;

CVX_API cvx_status cvx_spline_get_info(const cvx_spline* s, cvx_spline_info* out);
/* Oracle spec the spline was built from; "" when unknown. Valid while s lives. */
CVX_API const char* cvx_spline_function(const cvx_spline* s);
CVX_API cvx_status cvx_spline_knots(const cvx_spline* s, double* out, size_t capacity);
CVX_API cvx_status cvx_spline_eval(const cvx_spline* s, int order, double x, double* out);
/* CVX_INVALID_ARGUMENT when the spline carries no trace (baselines, parsed files without one). */
CVX_API cvx_status cvx_spline_trace(const cvx_spline* s, cvx_glue_trace* out);
CVX_API cvx_status cvx_spline_verify_convexity(const cvx_spline* s, int* convex);
CVX_API cvx_status cvx_spline_max_seam_mismatch(const cvx_spline* s, double* out);

CVX_API cvx_status cvx_spline_to_json(const cvx_spline* s, char** out);
CVX_API cvx_status cvx_spline_from_json(const char* json, cvx_spline** out);

/* Certification */

typedef struct cvx_bound_summary {
  double sup_ratio;
  double sup_x;
  double atol;
  int excluded_ok;
  size_t excluded_count;
  size_t grid_count;
} cvx_bound_summary;

/* bound_id is one of "2.3" "2.4" "2.5" "2.11" "2.12" "2.13". report_json may be NULL. */
CVX_API cvx_status cvx_certify(const cvx_oracle* f, const cvx_spline* s, int r, int n,
                               const char* bound_id, int grid_size, cvx_bound_summary* out,
                               char** report_json);

typedef struct cvx_sweep_options {
  int grid_size;
  int modulus_grid;
  cvx_glue_config glue;
  int jobs;
  int timing;
} cvx_sweep_options;

CVX_API void cvx_sweep_options_default(cvx_sweep_options* options);
CVX_API cvx_status cvx_sweep_csv(const cvx_oracle* f, int r, const int* n_list, size_t count,
                                 const cvx_sweep_options* options, char** csv);

/* Negative results */

typedef struct cvx_counterexample {
  int r;
  int m;
  double x_last;
  double epsilon;
  double markov_lhs;
  double markov_rhs;
  double epsilon_threshold;
  int contradiction;
} cvx_counterexample;

/* epsilon = NaN selects the automatic choice. */
CVX_API cvx_status cvx_counterexample_witness(int r, int m, double x_last, double epsilon,
                                              cvx_counterexample* out);

typedef struct cvx_polynomial_witness {
  int r;
  int n;
  double epsilon;
  double markov_lhs;
  double markov_rhs;
  double ratio;
  int contradiction;
} cvx_polynomial_witness;

CVX_API cvx_status cvx_polynomial_witness_compute(int r, int n, cvx_polynomial_witness* out);

/* thresholds_out receives count entries. */
CVX_API cvx_status cvx_threshold_growth(int r, const double* eps, size_t count,
                                        const cvx_glue_config* config, int* thresholds_out,
                                        int* nondecreasing);

/* Moduli */

typedef struct cvx_modulus_result {
  double value;
  double arg_u;
  double arg_x;
  int grid_density;
} cvx_modulus_result;

/* omega_k of the oracle's derivative of the given order. */
CVX_API cvx_status cvx_modulus(const cvx_oracle* f, int derivative_order, int k, double t,
                               double a, double b, int grid, cvx_modulus_result* out);

#ifdef __cplusplus
}
#endif

#endif /* CONVEXLAB_CONVEXLAB_H_ */
