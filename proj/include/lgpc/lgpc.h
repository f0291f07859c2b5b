#ifndef LGPC_LGPC_H
#define LGPC_LGPC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LGPC_API __declspec(dllexport)
#else
#define LGPC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as process exit codes. */
typedef enum lgpc_status {
  LGPC_OK = 0,
  LGPC_ERR_VALIDATION = 2,
  LGPC_ERR_CONVERGENCE = 3,
  LGPC_ERR_IO = 4,
  LGPC_ERR_NUMERICAL = 5,
  LGPC_ERR_INTERNAL = 6
} lgpc_status;

typedef struct lgpc_config lgpc_config;
typedef struct lgpc_series lgpc_series;
typedef struct lgpc_posterior lgpc_posterior;
typedef struct lgpc_forecast lgpc_forecast;

LGPC_API const char* lgpc_version(void);

/* Details of the last failure on the calling thread. Valid until the next
   call that fails on the same thread. */
LGPC_API const char* lgpc_last_error_message(void);
LGPC_API const char* lgpc_last_error_kind(void);
/* {"status":..,"kind":..,"message":..} */
LGPC_API const char* lgpc_last_error_json(void);

/* ---- configuration ---- */

LGPC_API lgpc_config* lgpc_config_new(void);
LGPC_API void lgpc_config_free(lgpc_config* cfg);
/* Keys not present keep their current value; unknown keys are an error. */
LGPC_API lgpc_status lgpc_config_merge_json(lgpc_config* cfg, const char* json);
LGPC_API lgpc_status lgpc_config_load(lgpc_config* cfg, const char* path);
/* Copies the JSON form into buf (NUL-terminated, truncated to cap) and
   returns the full length. */
LGPC_API size_t lgpc_config_to_json(const lgpc_config* cfg, char* buf, size_t cap);
LGPC_API lgpc_status lgpc_config_validate(const lgpc_config* cfg);

LGPC_API void lgpc_config_set_seed(lgpc_config* cfg, uint64_t seed);
LGPC_API void lgpc_config_set_phi(lgpc_config* cfg, double phi);
LGPC_API void lgpc_config_set_phi_grid(lgpc_config* cfg, const double* grid, size_t n);
LGPC_API void lgpc_config_set_chains(lgpc_config* cfg, int n_chains);
LGPC_API void lgpc_config_set_thinning(lgpc_config* cfg, int thinning);
LGPC_API void lgpc_config_set_samples(lgpc_config* cfg, int posterior_size);
LGPC_API void lgpc_config_set_threads(lgpc_config* cfg, int threads);
LGPC_API lgpc_status lgpc_config_set_criterion(lgpc_config* cfg, const char* name);
LGPC_API uint64_t lgpc_config_seed(const lgpc_config* cfg);
LGPC_API double lgpc_config_phi(const lgpc_config* cfg);

/* ---- data ---- */

typedef struct lgpc_csv_options {
  const char* time_column;   /* NULL: "time" */
  const char* count_column;  /* NULL: "y" */
  int intercept;
  int trend;
  const char* season_column; /* NULL or "": none */
} lgpc_csv_options;

LGPC_API lgpc_csv_options lgpc_csv_options_default(void);

LGPC_API lgpc_status lgpc_series_from_csv(const char* path, const lgpc_csv_options* opts,
                                          lgpc_series** out);
/* design is row-major, length * columns. */
LGPC_API lgpc_status lgpc_series_from_arrays(const double* times, const int64_t* counts,
                                             const double* design, size_t length,
                                             size_t columns, lgpc_series** out);
LGPC_API void lgpc_series_free(lgpc_series* s);
LGPC_API size_t lgpc_series_length(const lgpc_series* s);
LGPC_API size_t lgpc_series_columns(const lgpc_series* s);
/* Rows [begin, end). */
LGPC_API lgpc_status lgpc_series_slice(const lgpc_series* s, size_t begin, size_t end,
                                       lgpc_series** out);

/* ---- model ---- */

LGPC_API lgpc_status lgpc_fit(const lgpc_series* s, const lgpc_config* cfg,
                              lgpc_posterior** out);
LGPC_API void lgpc_posterior_free(lgpc_posterior* p);
LGPC_API size_t lgpc_posterior_size(const lgpc_posterior* p);
LGPC_API double lgpc_posterior_phi(const lgpc_posterior* p);
LGPC_API int lgpc_posterior_burn_sweeps(const lgpc_posterior* p);
LGPC_API double lgpc_posterior_mean_sigma2(const lgpc_posterior* p);
LGPC_API double lgpc_posterior_mean_sigmaw2(const lgpc_posterior* p);
/* Writes min(n, columns) posterior-mean coefficients; returns the count. */
LGPC_API size_t lgpc_posterior_mean_beta(const lgpc_posterior* p, double* out, size_t n);

typedef struct lgpc_fit_summary {
  double r2;
  double rmse;
  double loglik;
  double sigma2_hat;
  double sigmaw2_hat;
  double final_rhat;
} lgpc_fit_summary;

LGPC_API lgpc_status lgpc_fit_summary_of(const lgpc_posterior* p, const lgpc_series* s,
                                         lgpc_fit_summary* out);

/* future_design is row-major, horizon * columns. */
LGPC_API lgpc_status lgpc_forecast_new(const lgpc_posterior* p, const lgpc_series* s,
                                       const lgpc_config* cfg, const double* future_times,
                                       const double* future_design, size_t horizon,
                                       lgpc_forecast** out);
LGPC_API void lgpc_forecast_free(lgpc_forecast* f);
LGPC_API size_t lgpc_forecast_horizon(const lgpc_forecast* f);
LGPC_API double lgpc_forecast_point(const lgpc_forecast* f, size_t i);
LGPC_API lgpc_status lgpc_forecast_interval(const lgpc_forecast* f, size_t i, int64_t* lower,
                                            int64_t* upper);
/* Predictive probability of count k at horizon i (0 beyond the support). */
LGPC_API double lgpc_forecast_prob(const lgpc_forecast* f, size_t i, int64_t k);

typedef struct lgpc_scores {
  double brier;
  double spherical;
  double rps;
  double rmse;
} lgpc_scores;

LGPC_API lgpc_status lgpc_forecast_score(const lgpc_forecast* f, const int64_t* observed,
                                         size_t n, lgpc_scores* out);

/* ---- commands: file in, file out ---- */

typedef struct lgpc_fit_request {
  const char* data_path;
  lgpc_csv_options csv;
  const char* draws_path;    /* posterior draws table */
  const char* metrics_path;  /* fit metrics table */
  int record_timings;
} lgpc_fit_request;

typedef struct lgpc_cv_request {
  const char* data_path;
  lgpc_csv_options csv;
  const char* out_path;
  int record_timings;
} lgpc_cv_request;

typedef struct lgpc_forecast_request {
  const char* data_path;
  lgpc_csv_options csv;
  const char* draws_path;    /* NULL: fit in-process with the given config */
  const char* future_path;   /* time + covariates; counts optional */
  size_t horizon;            /* 0: every row of the future file */
  const char* out_path;      /* point/interval table */
  const char* pmf_path;      /* long-form pmf table */
  int record_timings;
} lgpc_forecast_request;

typedef struct lgpc_simulate_request {
  int dgp;
  int reps;
  int length;
  int cross_validate;
  const char* mse_path;
  const char* scores_path;
  const char* replications_path; /* NULL: not written */
  int record_timings;
} lgpc_simulate_request;

typedef struct lgpc_score_request {
  const char* forecast_path;
  const char* pmf_path;
  const char* truth_path;
  lgpc_csv_options csv;
  const char* out_path;
} lgpc_score_request;

LGPC_API lgpc_status lgpc_cmd_fit(const lgpc_fit_request* req, const lgpc_config* cfg);
LGPC_API lgpc_status lgpc_cmd_cv(const lgpc_cv_request* req, const lgpc_config* cfg,
                                 double* phi_opt);
LGPC_API lgpc_status lgpc_cmd_forecast(const lgpc_forecast_request* req,
                                       const lgpc_config* cfg);
LGPC_API lgpc_status lgpc_cmd_simulate(const lgpc_simulate_request* req,
                                       const lgpc_config* cfg);
LGPC_API lgpc_status lgpc_cmd_score(const lgpc_score_request* req, lgpc_scores* out);

#ifdef __cplusplus
}
#endif

#endif
