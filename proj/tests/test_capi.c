/* Exercises the shared library through its C header only. */
#include "lgpc/lgpc.h"

#include <math.h>
#include <stdio.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

static void config_roundtrip(void) {
  lgpc_config* cfg = lgpc_config_new();
  char buf[1024];
  EXPECT(cfg != NULL);
  EXPECT(lgpc_config_merge_json(cfg, "{\"phi\": 0.5, \"seed\": 11}") == LGPC_OK);
  EXPECT(lgpc_config_phi(cfg) == 0.5);
  EXPECT(lgpc_config_seed(cfg) == 11);
  EXPECT(lgpc_config_merge_json(cfg, "{\"bogus\": 1}") == LGPC_ERR_VALIDATION);
  EXPECT(strcmp(lgpc_last_error_kind(), "InvalidParameter") == 0);
  EXPECT(strstr(lgpc_last_error_json(), "bogus") != NULL);
  EXPECT(lgpc_config_merge_json(cfg, "{not json") == LGPC_ERR_VALIDATION);
  EXPECT(lgpc_config_to_json(cfg, buf, sizeof buf) < sizeof buf);
  EXPECT(strstr(buf, "\"phi\":0.5") != NULL);
  EXPECT(lgpc_config_to_json(cfg, buf, 4) > 4 && strlen(buf) == 3);
  lgpc_config_set_thinning(cfg, 5);
  EXPECT(lgpc_config_validate(cfg) == LGPC_ERR_VALIDATION);
  lgpc_config_set_thinning(cfg, 20);
  EXPECT(lgpc_config_set_criterion(cfg, "mae") == LGPC_ERR_VALIDATION);
  EXPECT(lgpc_config_set_criterion(cfg, "brier") == LGPC_OK);
  EXPECT(lgpc_config_validate(cfg) == LGPC_OK);
  EXPECT(lgpc_config_load(cfg, "/nonexistent.json") == LGPC_ERR_IO);
  lgpc_config_free(cfg);
  lgpc_config_free(NULL);
}

static void series_errors(void) {
  double times[3] = {1, 1, 2};
  int64_t counts[3] = {1, 2, 3};
  double design[3] = {1, 1, 1};
  lgpc_series* s = (lgpc_series*)1;
  EXPECT(lgpc_series_from_arrays(times, counts, design, 3, 1, &s) == LGPC_ERR_VALIDATION);
  EXPECT(s == NULL);
  EXPECT(strcmp(lgpc_last_error_kind(), "Validation") == 0);
  EXPECT(lgpc_series_from_arrays(NULL, counts, design, 3, 1, &s) == LGPC_ERR_VALIDATION);
  EXPECT(lgpc_series_from_csv("/nonexistent.csv", NULL, &s) == LGPC_ERR_IO);
  EXPECT(lgpc_series_length(NULL) == 0);
}

static void fit_and_forecast(void) {
  enum { T = 40, P = 2, H = 3 };
  double times[T], design[T * P], ftimes[H], fdesign[H * P], beta[P];
  int64_t counts[T];
  int64_t observed[H] = {4, 5, 6};
  int i;
  lgpc_series* s = NULL;
  lgpc_config* cfg = lgpc_config_new();
  lgpc_posterior* post = NULL;
  lgpc_forecast* fc = NULL;
  lgpc_fit_summary sum;
  lgpc_scores sc;
  int64_t lo, hi;
  double mass;

  for (i = 0; i < T; ++i) {
    times[i] = i + 1;
    design[i * P] = 1.0;
    design[i * P + 1] = sin(0.3 * i);
    counts[i] = 3 + (i * 7) % 5;
  }
  for (i = 0; i < H; ++i) {
    ftimes[i] = T + 1 + i;
    fdesign[i * P] = 1.0;
    fdesign[i * P + 1] = 0.0;
  }
  EXPECT(lgpc_series_from_arrays(times, counts, design, T, P, &s) == LGPC_OK);
  EXPECT(lgpc_series_length(s) == T);
  EXPECT(lgpc_series_columns(s) == P);
  lgpc_config_set_samples(cfg, 80);
  lgpc_config_set_threads(cfg, 1);
  EXPECT(lgpc_fit(s, cfg, &post) == LGPC_OK);
  EXPECT(lgpc_posterior_size(post) == 80);
  EXPECT(lgpc_posterior_phi(post) == 0.25);
  EXPECT(lgpc_posterior_burn_sweeps(post) >= 100);
  EXPECT(lgpc_posterior_mean_sigma2(post) > 0.0);
  EXPECT(lgpc_posterior_mean_beta(post, beta, P) == P);
  EXPECT(fabs(beta[0] - log(5.0)) < 0.5);
  EXPECT(lgpc_fit_summary_of(post, s, &sum) == LGPC_OK);
  EXPECT(sum.rmse >= 0.0 && sum.final_rhat < 1.5);

  EXPECT(lgpc_forecast_new(post, s, cfg, ftimes, fdesign, H, &fc) == LGPC_OK);
  EXPECT(lgpc_forecast_horizon(fc) == H);
  EXPECT(lgpc_forecast_point(fc, 0) > 0.0);
  EXPECT(lgpc_forecast_interval(fc, 0, &lo, &hi) == LGPC_OK && lo <= hi);
  EXPECT(lgpc_forecast_interval(fc, H, &lo, &hi) == LGPC_ERR_VALIDATION);
  mass = 0.0;
  for (i = 0; i < 200; ++i) mass += lgpc_forecast_prob(fc, 0, i);
  EXPECT(fabs(mass - 1.0) < 1e-6);
  EXPECT(lgpc_forecast_prob(fc, 0, -1) == 0.0);
  EXPECT(lgpc_forecast_score(fc, observed, H, &sc) == LGPC_OK);
  EXPECT(sc.spherical >= -1.0 && sc.spherical <= 0.0 && sc.rps >= 0.0);
  EXPECT(lgpc_forecast_score(fc, observed, 2, &sc) == LGPC_ERR_VALIDATION);

  ftimes[0] = T; /* coincides with an observed time */
  lgpc_forecast_free(fc);
  fc = NULL;
  EXPECT(lgpc_forecast_new(post, s, cfg, ftimes, fdesign, H, &fc) == LGPC_ERR_VALIDATION);

  lgpc_forecast_free(fc);
  lgpc_posterior_free(post);
  lgpc_series_free(s);
  lgpc_config_free(cfg);
}

int main(void) {
  EXPECT(strcmp(lgpc_version(), "0.1.0") == 0);
  config_roundtrip();
  series_errors();
  fit_and_forecast();
  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return 1;
  }
  printf("C API checks passed\n");
  return 0;
}
