#ifndef PATHCALC_H
#define PATHCALC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PC_API __declspec(dllexport)
#else
#define PC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pc_status {
  PC_OK = 0,
  PC_LENGTH_MISMATCH = 1,
  PC_NON_MONOTONE_TIMES = 2,
  PC_NON_FINITE_VALUE = 3,
  PC_OUT_OF_DOMAIN = 4,
  PC_BAD_PARAMETER = 5,
  PC_PARSE_ERROR = 6,
  PC_MISSING_COLUMN = 7,
  PC_EMPTY_MONITOR_SET = 8,
  PC_DOMAIN_MISMATCH = 9,
  PC_DIMENSION_MISMATCH = 10,
  PC_NON_POSITIVE_PATH = 11,
  PC_TOO_FEW_SAMPLES = 12,
  PC_BAD_WEIGHT = 13,
  PC_QV_RANGE_EXCEEDED = 14,
  PC_EMPTY_ENSEMBLE = 15,
  PC_DEGENERATE_DENOMINATOR = 16,
  PC_IO_ERROR = 17,
  PC_NULL_ARGUMENT = 100,
  PC_OUT_OF_MEMORY = 101,
  PC_INTERNAL = 102
} pc_status;

PC_API const char* pc_status_name(pc_status status);
/* Message of the last failed call on this thread; "" after a success. */
PC_API const char* pc_last_error(void);
PC_API const char* pc_version(void);

typedef struct pc_path pc_path;
typedef struct pc_frame pc_frame;
typedef struct pc_partition pc_partition;
typedef struct pc_strategy pc_strategy;
typedef struct pc_ensemble pc_ensemble;

/* All *_free functions accept NULL. */

/* ---- paths ---- */

PC_API pc_status pc_path_create(const double* times, const double* values, size_t n, pc_path** out);
PC_API void pc_path_free(pc_path* path);
PC_API size_t pc_path_size(const pc_path* path);
/* Borrowed; valid while the handle lives. */
PC_API const double* pc_path_times(const pc_path* path);
PC_API const double* pc_path_values(const pc_path* path);
PC_API pc_status pc_path_sample(const pc_path* path, double t, double* out);
PC_API pc_status pc_sup_distance(const pc_path* a, const pc_path* b, double* out);

/* ---- frames ---- */

PC_API pc_status pc_frame_create(const double* times, size_t n, const double* const* columns,
                                 const char* const* names, size_t column_count, size_t traded_count,
                                 pc_frame** out);
PC_API void pc_frame_free(pc_frame* frame);
PC_API size_t pc_frame_column_count(const pc_frame* frame);
PC_API size_t pc_frame_traded_count(const pc_frame* frame);
PC_API size_t pc_frame_size(const pc_frame* frame);
PC_API const char* pc_frame_column_name(const pc_frame* frame, size_t j);
PC_API pc_status pc_frame_column(const pc_frame* frame, size_t j, pc_path** out);
PC_API pc_status pc_frame_column_by_name(const pc_frame* frame, const char* name, pc_path** out);

/* columns may be NULL (all non-time columns); traded_count 0 means all. */
PC_API pc_status pc_read_csv(const char* file, const char* time_column, const char* const* columns,
                             size_t column_count, size_t traded_count, pc_frame** out);
PC_API pc_status pc_write_csv(const pc_frame* frame, const char* file);
/* Paths written side by side on the union of their grids. */
PC_API pc_status pc_write_paths_csv(const pc_path* const* paths, const char* const* names, size_t count,
                                    const char* file);

/* ---- generators ---- */

typedef enum pc_model {
  PC_MODEL_BROWNIAN = 0,
  PC_MODEL_GBM = 1,
  PC_MODEL_CORRELATED_GBM = 2,
  PC_MODEL_DETERMINISTIC = 3,
  PC_MODEL_BROWNIAN_SKELETON = 4
} pc_model;

typedef struct pc_model_params {
  pc_model model;
  double horizon;
  size_t steps;
  uint64_t seed;
  double sigma;
  double x0;
  double sigma_s;
  double sigma_i;
  double rho;
  double s0;
  double i0;
  const char* shape; /* constant | line | tent | sine | exp_line */
  double slope;
  double amplitude;
  int skeleton_level;
  double skeleton_eps0;
  size_t columns;
} pc_model_params;

PC_API void pc_model_params_default(pc_model_params* params);
PC_API pc_status pc_model_from_name(const char* name, pc_model* out);
PC_API pc_status pc_generate(const pc_model_params* params, uint64_t stream, pc_frame** out);

PC_API pc_status pc_ensemble_create(const pc_model_params* params, size_t size, pc_ensemble** out);
PC_API void pc_ensemble_free(pc_ensemble* ensemble);
PC_API size_t pc_ensemble_size(const pc_ensemble* ensemble);
PC_API pc_status pc_ensemble_frame(const pc_ensemble* ensemble, size_t index, pc_frame** out);

/* ---- partitions ---- */

/* max_stops 0 means no cap. */
PC_API pc_status pc_lebesgue_partition(const pc_path* const* monitored, size_t count, int n, double eps0,
                                       size_t max_stops, pc_partition** out);
PC_API pc_status pc_log_partition(const pc_path* const* monitored, size_t count, int n, double eps0,
                                  size_t max_stops, pc_partition** out);
PC_API pc_status pc_explicit_partition(const double* stops, size_t count, double begin, double end,
                                       pc_partition** out);
PC_API void pc_partition_free(pc_partition* p);
PC_API size_t pc_partition_stop_count(const pc_partition* p);
PC_API const double* pc_partition_stops(const pc_partition* p);
PC_API double pc_partition_threshold(const pc_partition* p);
PC_API int pc_partition_exhausted(const pc_partition* p);
PC_API pc_status pc_verify_fineness(const pc_partition* p, const pc_path* path, double bound, int* fine,
                                    double* max_oscillation);

/* ---- calculus ---- */

PC_API pc_status pc_ito_approx(const pc_path* h, const pc_path* x, const pc_partition* p, pc_path** out);
PC_API pc_status pc_covariation(const pc_path* x, const pc_path* y, const pc_partition* p, pc_path** out);
PC_API pc_status pc_polarization(const pc_path* x, const pc_path* y, const pc_partition* p, pc_path** out);
PC_API pc_status pc_by_parts_residual(const pc_path* x, const pc_path* y, const pc_partition* p, double* out);
PC_API pc_status pc_stieltjes_integral(const pc_path* h, const pc_path* a, pc_path** out);

typedef struct pc_scalar_field {
  size_t dim;
  void* user;
  double (*value)(const double* x, void* user);
  void (*gradient)(const double* x, double* g, void* user);  /* dim entries */
  void (*hessian)(const double* x, double* h, void* user);   /* dim*dim, row major */
} pc_scalar_field;

PC_API pc_status pc_ito_formula_residual(const pc_scalar_field* f, const pc_path* const* x, size_t count,
                                         const pc_partition* p, double* out);

/* ---- Doleans exponential and logarithm ---- */

PC_API pc_status pc_doleans_exp(const pc_path* x, const pc_partition* p, pc_path** out);
PC_API pc_status pc_doleans_log(const pc_path* y, const pc_partition* p, pc_path** out);
PC_API pc_status pc_doleans_log_integral(const pc_path* y, const pc_partition* p, pc_path** out);
PC_API pc_status pc_sde_residual(const pc_path* y, const pc_path* x, const pc_partition* p, double* out);

/* ---- strategies, numeraires, Girsanov ---- */

/* bets is row major, count rows of width traded. bound <= 0 means none. */
PC_API pc_status pc_strategy_create(const double* stop_times, size_t count, const double* bets, size_t traded,
                                    double bound, pc_strategy** out);
PC_API pc_status pc_strategy_parse(const char* json, double bound, pc_strategy** out);
PC_API pc_status pc_strategy_to_json(const pc_strategy* g, char** out);
PC_API void pc_strategy_free(pc_strategy* g);

PC_API pc_status pc_capital_process(const pc_strategy* g, const pc_frame* frame, double c, pc_path** out);
PC_API pc_status pc_self_financing(const pc_strategy* g, const pc_frame* frame, const pc_path* numeraire,
                                   double c, pc_path** capital, double* defect);
PC_API pc_status pc_discount(const pc_path* x, const pc_path* numeraire, pc_path** out);

typedef enum pc_girsanov_method { PC_GIRSANOV_STIELTJES = 0, PC_GIRSANOV_LOG_COVARIATION = 1 } pc_girsanov_method;

PC_API pc_status pc_girsanov_correct(const pc_path* m, const pc_path* i, const pc_partition* p,
                                     pc_girsanov_method method, pc_path** out);

typedef struct pc_martingale_report {
  size_t n_paths;
  double weighted_mean_terminal;
  double initial_value;
  double std_error;
  double z_score;
  int pass;
} pc_martingale_report;

/* weights may be NULL for equal weights. */
PC_API pc_status pc_martingale_test(const double* terminal, size_t n, double initial, const double* weights,
                                    pc_martingale_report* out);

/* ---- time change ---- */

PC_API pc_status pc_qv_time_change(const pc_path* x, const pc_partition* p, const double* s_grid, size_t count,
                                   pc_path** out);
/* Writes `steps` normalized increments into out. */
PC_API pc_status pc_unit_qv_increments(const pc_path* x, const pc_partition* p, size_t steps, double* out);

typedef struct pc_ks_result {
  size_t n;
  double statistic;
  double critical;
  int pass;
} pc_ks_result;

PC_API pc_status pc_brownian_law_test(const double* increments, size_t n, pc_ks_result* out);

/* ---- relative growth and CAPM ---- */

PC_API pc_status pc_relative_growth(const pc_path* x, const pc_partition* p, pc_path** out);
PC_API pc_status pc_relative_covariation(const pc_path* x, const pc_path* y, const pc_partition* p,
                                         pc_girsanov_method method, pc_path** out);
PC_API pc_status pc_capm_deviation(const pc_path* s, const pc_path* i, const pc_partition* p, pc_path** out);
PC_API pc_status pc_exp_test_process(const pc_path* s, const pc_path* i, const pc_partition* p, double eps,
                                     pc_path** out);
PC_API pc_status pc_capm_beta(const pc_path* s, const pc_path* i, const pc_partition* p, double t, double* lhs,
                              double* rhs);

/* ---- reports ---- */

/* Named analysis on JSON options. *out receives the canonical JSON report
   (free with pc_string_free), *ok its "ok" flag. */
PC_API pc_status pc_run_analysis(const char* name, const char* options_json, char** out, int* ok);
PC_API void pc_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
