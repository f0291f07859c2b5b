#include "lgpc/lgpc.h"

#include "lgpc/covariance.hpp"
#include "lgpc/error.hpp"
#include "lgpc/forecast.hpp"
#include "lgpc/gibbs.hpp"
#include "lgpc/io.hpp"
#include "lgpc/phi_select.hpp"
#include "lgpc/scoring.hpp"
#include "lgpc/simgen.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <new>
#include <optional>

struct lgpc_config {
  lgpc::ModelConfig value;
};

struct lgpc_series {
  lgpc::ObservedSeries value;
};

struct lgpc_posterior {
  lgpc::PosteriorSamples value;
};

struct lgpc_forecast {
  std::vector<lgpc::PredictiveDistribution> value;
};

namespace {

struct LastError {
  lgpc_status status = LGPC_OK;
  std::string kind = "none";
  std::string message;
  std::string json = "{}";
};

thread_local LastError last_error;

lgpc_status status_of(lgpc::ErrorCode code) {
  using lgpc::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidParameter:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::Validation:
    case ErrorCode::NonStationaryCoefficients:
    case ErrorCode::InsufficientData:
    case ErrorCode::InvalidPmf:
    case ErrorCode::RankDeficient:
    case ErrorCode::Parse:
    case ErrorCode::Schema:
      return LGPC_ERR_VALIDATION;
    case ErrorCode::ConvergenceFailure:
    case ErrorCode::NotConverged:
    case ErrorCode::Divergence:
      return LGPC_ERR_CONVERGENCE;
    case ErrorCode::Io:
      return LGPC_ERR_IO;
    case ErrorCode::CholeskyFailure:
    case ErrorCode::EnvelopeFailure:
    case ErrorCode::EmptyPosterior:
      return LGPC_ERR_NUMERICAL;
  }
  return LGPC_ERR_INTERNAL;
}

lgpc_status record(lgpc_status status, std::string kind, std::string message) {
  last_error.status = status;
  last_error.kind = std::move(kind);
  last_error.message = std::move(message);
  last_error.json = nlohmann::json{{"status", static_cast<int>(status)},
                                   {"kind", last_error.kind},
                                   {"message", last_error.message}}
                        .dump();
  return status;
}

template <class Fn>
lgpc_status guarded(Fn&& fn) {
  try {
    fn();
    return LGPC_OK;
  } catch (const lgpc::Error& e) {
    return record(status_of(e.code()), lgpc::to_string(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return record(LGPC_ERR_VALIDATION, "Parse", e.what());
  } catch (const std::bad_alloc&) {
    return record(LGPC_ERR_INTERNAL, "OutOfMemory", "allocation failed");
  } catch (const std::exception& e) {
    return record(LGPC_ERR_INTERNAL, "Internal", e.what());
  } catch (...) {
    return record(LGPC_ERR_INTERNAL, "Internal", "unknown exception");
  }
}

void require(const void* p, const char* what) {
  if (!p) lgpc::fail(lgpc::ErrorCode::InvalidParameter, std::string(what) + " is null");
}

lgpc::CsvOptions csv_options(const lgpc_csv_options& o) {
  lgpc::CsvOptions out;
  if (o.time_column) out.time_column = o.time_column;
  if (o.count_column) out.count_column = o.count_column;
  out.intercept = o.intercept != 0;
  out.trend = o.trend != 0;
  if (o.season_column) out.season_column = o.season_column;
  return out;
}

Eigen::MatrixXd row_major(const double* data, std::size_t rows, std::size_t cols) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = data[i * cols + j];
    }
  }
  return m;
}

class Stopwatch {
 public:
  explicit Stopwatch(bool enabled) : enabled_(enabled), start_(std::chrono::steady_clock::now()) {}
  void stamp(lgpc::RunManifest& m, const std::string& key = "total_seconds") const {
    if (!enabled_) return;
    if (!m.timings) m.timings.emplace();
    (*m.timings)[key] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point start_;
};

lgpc::RunManifest manifest_for(const char* command, const lgpc::ModelConfig& cfg,
                               const std::string& digest) {
  lgpc::RunManifest m;
  m.command = command;
  m.config = lgpc::config_to_json(cfg);
  m.input_digest = digest;
  m.seed = cfg.seed;
  return m;
}

struct LoadedData {
  std::string digest;
  lgpc::ObservedSeries series;
  std::vector<std::string> season_levels;
};

LoadedData load_data(const char* path, const lgpc_csv_options& csv) {
  require(path, "data path");
  LoadedData d;
  const std::string text = lgpc::read_file(path);
  d.digest = lgpc::content_digest(text);
  d.series = lgpc::parse_csv(text, csv_options(csv), &d.season_levels);
  lgpc::require_valid(d.series);
  return d;
}

nlohmann::json gr_history_json(const lgpc::PosteriorSamples& s) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& g : s.gr_history) out.push_back({g.sweep, g.statistic});
  return out;
}

lgpc::PosteriorSamples fit_series(const lgpc::ObservedSeries& series,
                                  const lgpc::ModelConfig& cfg) {
  cfg.validate();
  lgpc::require_valid(series);
  const lgpc::CorrelationFactor factor = lgpc::build_correlation(series.index, cfg.phi);
  return lgpc::run_sampler(series, cfg, factor);
}

double final_rhat(const lgpc::PosteriorSamples& s) {
  return s.gr_history.empty() ? 0.0 : s.gr_history.back().statistic;
}

}  // namespace

extern "C" {

const char* lgpc_version(void) { return lgpc::kVersion; }
const char* lgpc_last_error_message(void) { return last_error.message.c_str(); }
const char* lgpc_last_error_kind(void) { return last_error.kind.c_str(); }
const char* lgpc_last_error_json(void) { return last_error.json.c_str(); }

lgpc_config* lgpc_config_new(void) { return new (std::nothrow) lgpc_config{}; }
void lgpc_config_free(lgpc_config* cfg) { delete cfg; }

lgpc_status lgpc_config_merge_json(lgpc_config* cfg, const char* json) {
  return guarded([&] {
    require(cfg, "config");
    require(json, "json");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
      lgpc::fail(lgpc::ErrorCode::Parse, std::string("config is not valid JSON: ") + e.what());
    }
    cfg->value = lgpc::config_from_json(j, cfg->value);
  });
}

lgpc_status lgpc_config_load(lgpc_config* cfg, const char* path) {
  return guarded([&] {
    require(path, "config path");
    const std::string text = lgpc::read_file(path);
    if (lgpc_config_merge_json(cfg, text.c_str()) != LGPC_OK) {
      throw lgpc::Error(lgpc::ErrorCode::InvalidParameter,
                        std::string(path) + ": " + last_error.message);
    }
  });
}

size_t lgpc_config_to_json(const lgpc_config* cfg, char* buf, size_t cap) {
  if (!cfg) return 0;
  const std::string s = lgpc::config_to_json(cfg->value).dump();
  if (buf && cap > 0) {
    const std::size_t n = std::min(cap - 1, s.size());
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
  }
  return s.size();
}

lgpc_status lgpc_config_validate(const lgpc_config* cfg) {
  return guarded([&] {
    require(cfg, "config");
    cfg->value.validate();
  });
}

void lgpc_config_set_seed(lgpc_config* cfg, uint64_t seed) { if (cfg) cfg->value.seed = seed; }
void lgpc_config_set_phi(lgpc_config* cfg, double phi) { if (cfg) cfg->value.phi = phi; }
void lgpc_config_set_phi_grid(lgpc_config* cfg, const double* grid, size_t n) {
  if (cfg && (grid || n == 0)) cfg->value.phi_grid.assign(grid, grid + n);
}
void lgpc_config_set_chains(lgpc_config* cfg, int n) { if (cfg) cfg->value.n_chains = n; }
void lgpc_config_set_thinning(lgpc_config* cfg, int m) { if (cfg) cfg->value.thinning = m; }
void lgpc_config_set_samples(lgpc_config* cfg, int s) { if (cfg) cfg->value.posterior_size = s; }
void lgpc_config_set_threads(lgpc_config* cfg, int t) { if (cfg) cfg->value.threads = t; }

lgpc_status lgpc_config_set_criterion(lgpc_config* cfg, const char* name) {
  return guarded([&] {
    require(cfg, "config");
    require(name, "criterion");
    cfg->value.criterion = lgpc::parse_criterion(name);
  });
}

uint64_t lgpc_config_seed(const lgpc_config* cfg) { return cfg ? cfg->value.seed : 0; }
double lgpc_config_phi(const lgpc_config* cfg) { return cfg ? cfg->value.phi : 0.0; }

lgpc_csv_options lgpc_csv_options_default(void) {
  return lgpc_csv_options{nullptr, nullptr, 1, 0, nullptr};
}

lgpc_status lgpc_series_from_csv(const char* path, const lgpc_csv_options* opts,
                                 lgpc_series** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    const lgpc_csv_options o = opts ? *opts : lgpc_csv_options_default();
    *out = new lgpc_series{load_data(path, o).series};
  });
}

lgpc_status lgpc_series_from_arrays(const double* times, const int64_t* counts,
                                    const double* design, size_t length, size_t columns,
                                    lgpc_series** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    require(times, "times");
    require(counts, "counts");
    require(design, "design");
    lgpc::ObservedSeries s;
    s.index.times.assign(times, times + length);
    s.counts.assign(counts, counts + length);
    s.design = row_major(design, length, columns);
    for (std::size_t j = 0; j < columns; ++j) s.column_names.push_back("x" + std::to_string(j + 1));
    lgpc::require_valid(s);
    *out = new lgpc_series{std::move(s)};
  });
}

void lgpc_series_free(lgpc_series* s) { delete s; }
size_t lgpc_series_length(const lgpc_series* s) { return s ? s->value.length() : 0; }
size_t lgpc_series_columns(const lgpc_series* s) { return s ? s->value.columns() : 0; }

lgpc_status lgpc_series_slice(const lgpc_series* s, size_t begin, size_t end, lgpc_series** out) {
  return guarded([&] {
    require(s, "series");
    require(out, "out");
    *out = nullptr;
    *out = new lgpc_series{s->value.slice(begin, end)};
  });
}

lgpc_status lgpc_fit(const lgpc_series* s, const lgpc_config* cfg, lgpc_posterior** out) {
  return guarded([&] {
    require(s, "series");
    require(cfg, "config");
    require(out, "out");
    *out = nullptr;
    *out = new lgpc_posterior{fit_series(s->value, cfg->value)};
  });
}

void lgpc_posterior_free(lgpc_posterior* p) { delete p; }
size_t lgpc_posterior_size(const lgpc_posterior* p) { return p ? p->value.size() : 0; }
double lgpc_posterior_phi(const lgpc_posterior* p) { return p ? p->value.phi_used : 0.0; }
int lgpc_posterior_burn_sweeps(const lgpc_posterior* p) {
  return p ? p->value.burn_sweeps_used : 0;
}
double lgpc_posterior_mean_sigma2(const lgpc_posterior* p) {
  return p && p->value.size() > 0 ? p->value.mean_sigma2() : 0.0;
}
double lgpc_posterior_mean_sigmaw2(const lgpc_posterior* p) {
  return p && p->value.size() > 0 ? p->value.mean_sigmaw2() : 0.0;
}

size_t lgpc_posterior_mean_beta(const lgpc_posterior* p, double* out, size_t n) {
  if (!p || !out || p->value.size() == 0) return 0;
  const Eigen::VectorXd b = p->value.mean_beta();
  const std::size_t k = std::min(n, static_cast<std::size_t>(b.size()));
  for (std::size_t j = 0; j < k; ++j) out[j] = b[static_cast<Eigen::Index>(j)];
  return k;
}

lgpc_status lgpc_fit_summary_of(const lgpc_posterior* p, const lgpc_series* s,
                                lgpc_fit_summary* out) {
  return guarded([&] {
    require(p, "posterior");
    require(s, "series");
    require(out, "out");
    const lgpc::FitMetrics m = lgpc::fit_metrics(p->value, s->value);
    *out = lgpc_fit_summary{m.r2,
                            m.rmse,
                            m.loglik,
                            p->value.mean_sigma2(),
                            p->value.mean_sigmaw2(),
                            final_rhat(p->value)};
  });
}

lgpc_status lgpc_forecast_new(const lgpc_posterior* p, const lgpc_series* s,
                              const lgpc_config* cfg, const double* future_times,
                              const double* future_design, size_t horizon, lgpc_forecast** out) {
  return guarded([&] {
    require(p, "posterior");
    require(s, "series");
    require(cfg, "config");
    require(out, "out");
    *out = nullptr;
    require(future_times, "future times");
    require(future_design, "future design");
    const lgpc::CorrelationFactor factor =
        lgpc::build_correlation(s->value.index, p->value.phi_used);
    std::vector<double> times(future_times, future_times + horizon);
    *out = new lgpc_forecast{lgpc::forecast_horizon(
        p->value, s->value, factor, row_major(future_design, horizon, s->value.columns()), times,
        cfg->value.seed, 0, cfg->value.interval_level, cfg->value.threads)};
  });
}

void lgpc_forecast_free(lgpc_forecast* f) { delete f; }
size_t lgpc_forecast_horizon(const lgpc_forecast* f) { return f ? f->value.size() : 0; }

double lgpc_forecast_point(const lgpc_forecast* f, size_t i) {
  return f && i < f->value.size() ? f->value[i].point_forecast : 0.0;
}

lgpc_status lgpc_forecast_interval(const lgpc_forecast* f, size_t i, int64_t* lower,
                                   int64_t* upper) {
  return guarded([&] {
    require(f, "forecast");
    if (i >= f->value.size()) lgpc::fail(lgpc::ErrorCode::InvalidParameter, "horizon index out of range");
    if (lower) *lower = f->value[i].lower;
    if (upper) *upper = f->value[i].upper;
  });
}

double lgpc_forecast_prob(const lgpc_forecast* f, size_t i, int64_t k) {
  if (!f || i >= f->value.size() || k < 0) return 0.0;
  const auto& pmf = f->value[i].pmf;
  return static_cast<std::size_t>(k) < pmf.size() ? pmf[static_cast<std::size_t>(k)] : 0.0;
}

lgpc_status lgpc_forecast_score(const lgpc_forecast* f, const int64_t* observed, size_t n,
                                lgpc_scores* out) {
  return guarded([&] {
    require(f, "forecast");
    require(observed, "observed");
    require(out, "out");
    const lgpc::ScoreReport r =
        lgpc::score_forecasts(f->value, std::span<const std::int64_t>(observed, n));
    *out = lgpc_scores{r.brier, r.spherical, r.rps, r.rmse};
  });
}

lgpc_status lgpc_cmd_fit(const lgpc_fit_request* req, const lgpc_config* cfg) {
  return guarded([&] {
    require(req, "request");
    require(cfg, "config");
    const Stopwatch clock(req->record_timings != 0);
    const LoadedData data = load_data(req->data_path, req->csv);
    const lgpc::PosteriorSamples post = fit_series(data.series, cfg->value);

    lgpc::RunManifest m = manifest_for("fit", cfg->value, data.digest);
    m.extra = {{"phi", post.phi_used},
               {"burn_sweeps", post.burn_sweeps_used},
               {"gr_history", gr_history_json(post)},
               {"column_names", data.series.column_names},
               {"season_levels", data.season_levels}};
    clock.stamp(m);

    const lgpc::FitMetrics fm = lgpc::fit_metrics(post, data.series);
    std::vector<std::pair<std::string, double>> metrics{
        {"r2", fm.r2},
        {"rmse", fm.rmse},
        {"loglik", fm.loglik},
        {"sigma2_hat", post.mean_sigma2()},
        {"sigmaw2_hat", post.mean_sigmaw2()},
        {"phi", post.phi_used},
        {"burn_sweeps", post.burn_sweeps_used},
        {"final_rhat", final_rhat(post)},
        {"n_draws", static_cast<double>(post.size())}};
    const Eigen::VectorXd beta = post.mean_beta();
    for (std::size_t j = 0; j < data.series.columns(); ++j) {
      metrics.emplace_back("beta_hat_" + data.series.column_names[j],
                           beta[static_cast<Eigen::Index>(j)]);
    }
    if (req->draws_path) lgpc::write_file(req->draws_path, lgpc::draws_table(post, m));
    if (req->metrics_path) lgpc::write_file(req->metrics_path, lgpc::metrics_table(metrics, m));
  });
}

lgpc_status lgpc_cmd_cv(const lgpc_cv_request* req, const lgpc_config* cfg, double* phi_opt) {
  return guarded([&] {
    require(req, "request");
    require(cfg, "config");
    const Stopwatch clock(req->record_timings != 0);
    cfg->value.validate();
    const LoadedData data = load_data(req->data_path, req->csv);
    const lgpc::CvResult result =
        lgpc::select_phi(data.series, cfg->value, lgpc::CvPlan::from_config(cfg->value));
    lgpc::RunManifest m = manifest_for("cv", cfg->value, data.digest);
    m.extra = {{"phi_opt", result.phi_opt},
               {"criterion", lgpc::to_string(result.criterion)},
               {"n_train", result.n_train},
               {"n_validation", result.n_validation}};
    clock.stamp(m);
    if (req->out_path) lgpc::write_file(req->out_path, lgpc::cv_table(result, m));
    if (phi_opt) *phi_opt = result.phi_opt;
  });
}

lgpc_status lgpc_cmd_forecast(const lgpc_forecast_request* req, const lgpc_config* cfg) {
  return guarded([&] {
    require(req, "request");
    require(cfg, "config");
    require(req->future_path, "future path");
    const Stopwatch clock(req->record_timings != 0);
    cfg->value.validate();
    const LoadedData data = load_data(req->data_path, req->csv);

    lgpc::PosteriorSamples post;
    std::string draws_digest;
    if (req->draws_path) {
      const std::string text = lgpc::read_file(req->draws_path);
      draws_digest = lgpc::content_digest(text);
      lgpc::RunManifest dm;
      post = lgpc::parse_draws_table(text, &dm);
      if (dm.input_digest != data.digest) {
        lgpc::fail(lgpc::ErrorCode::Validation,
                   "draws were fitted to different data (digest " + dm.input_digest +
                       ", data " + data.digest + ")");
      }
      if (dm.extra.value("column_names", std::vector<std::string>{}) !=
          data.series.column_names) {
        lgpc::fail(lgpc::ErrorCode::Validation, "draws were fitted with a different design");
      }
      if (static_cast<std::size_t>(post.draws.front().mu.size()) != data.series.length() ||
          static_cast<std::size_t>(post.draws.front().beta.size()) != data.series.columns()) {
        lgpc::fail(lgpc::ErrorCode::DimensionMismatch, "draws do not match the data dimensions");
      }
    } else {
      post = fit_series(data.series, cfg->value);
    }

    const std::string future_text = lgpc::read_file(req->future_path);
    lgpc::CsvOptions fo = csv_options(req->csv);
    fo.require_counts = false;
    fo.season_levels = data.season_levels;
    lgpc::ObservedSeries future = lgpc::parse_csv(future_text, fo);
    if (future.column_names != data.series.column_names) {
      lgpc::fail(lgpc::ErrorCode::Schema, "future covariates do not match the data columns");
    }
    std::size_t h = req->horizon == 0 ? future.length() : req->horizon;
    if (h > future.length()) {
      lgpc::fail(lgpc::ErrorCode::Validation, "horizon " + std::to_string(h) +
                                                  " exceeds the " +
                                                  std::to_string(future.length()) +
                                                  " rows of the future file");
    }
    if (h == 0) lgpc::fail(lgpc::ErrorCode::Validation, "empty forecast horizon");
    std::vector<double> times(future.index.times.begin(),
                              future.index.times.begin() + static_cast<std::ptrdiff_t>(h));
    const lgpc::CorrelationFactor factor = lgpc::build_correlation(data.series.index, post.phi_used);
    const auto forecasts = lgpc::forecast_horizon(
        post, data.series, factor, future.design.topRows(static_cast<Eigen::Index>(h)), times,
        cfg->value.seed, 0, cfg->value.interval_level, cfg->value.threads);

    lgpc::RunManifest m = manifest_for("forecast", cfg->value, data.digest);
    m.extra = {{"phi", post.phi_used},
               {"future_digest", lgpc::content_digest(future_text)},
               {"horizon", h}};
    if (!draws_digest.empty()) m.extra["draws_digest"] = draws_digest;
    clock.stamp(m);
    if (req->out_path) lgpc::write_file(req->out_path, lgpc::forecast_table(forecasts, m));
    if (req->pmf_path) lgpc::write_file(req->pmf_path, lgpc::pmf_table(forecasts, m));
  });
}

lgpc_status lgpc_cmd_simulate(const lgpc_simulate_request* req, const lgpc_config* cfg) {
  return guarded([&] {
    require(req, "request");
    require(cfg, "config");
    const Stopwatch clock(req->record_timings != 0);
    lgpc::DgpSpec spec;
    spec.dgp_id = req->dgp;
    if (req->length > 0) spec.T = req->length;
    spec.validate();
    lgpc::StudyOptions opts;
    if (req->reps > 0) opts.n_reps = req->reps;
    opts.cross_validate = req->cross_validate != 0;
    opts.config = cfg->value;
    opts.config.validate();
    const lgpc::StudyTable study = lgpc::run_study(spec, opts);

    const std::string digest = lgpc::content_digest(
        nlohmann::json{{"dgp", spec.dgp_id}, {"T", spec.T}, {"reps", opts.n_reps}}.dump());
    lgpc::RunManifest m = manifest_for("simulate", cfg->value, digest);
    m.extra = {{"dgp", spec.dgp_id},
               {"T", spec.T},
               {"reps", opts.n_reps},
               {"cross_validate", opts.cross_validate},
               {"true_beta", spec.beta}};
    for (const auto& s : study.summaries) {
      m.extra[std::string("n_ok_") + lgpc::to_string(s.model)] = s.n_ok;
      m.extra[std::string("n_failed_") + lgpc::to_string(s.model)] = s.n_failed;
    }
    clock.stamp(m);
    if (req->mse_path) lgpc::write_file(req->mse_path, lgpc::study_mse_table(study, m));
    if (req->scores_path) lgpc::write_file(req->scores_path, lgpc::study_score_table(study, m));
    if (req->replications_path) {
      lgpc::write_file(req->replications_path, lgpc::study_replication_table(study, m));
    }
  });
}

lgpc_status lgpc_cmd_score(const lgpc_score_request* req, lgpc_scores* out) {
  return guarded([&] {
    require(req, "request");
    require(req->forecast_path, "forecast path");
    require(req->pmf_path, "pmf path");
    require(req->truth_path, "truth path");
    lgpc::RunManifest fm;
    const auto forecasts = lgpc::parse_forecast_tables(lgpc::read_file(req->forecast_path),
                                                       lgpc::read_file(req->pmf_path), &fm);
    const std::string truth_text = lgpc::read_file(req->truth_path);
    const std::string truth_digest = lgpc::content_digest(truth_text);
    const std::string expected = fm.extra.value("future_digest", std::string());
    if (expected != truth_digest) {
      lgpc::fail(lgpc::ErrorCode::Validation,
                 "truth file digest " + truth_digest +
                     " does not match the forecast's future file digest " + expected);
    }
    lgpc::CsvOptions to = csv_options(req->csv);
    to.intercept = true;
    const lgpc::ObservedSeries truth = lgpc::parse_csv(truth_text, to);
    if (truth.length() < forecasts.size()) {
      lgpc::fail(lgpc::ErrorCode::Validation, "truth file has fewer rows than the forecast horizon");
    }
    std::vector<std::int64_t> observed(truth.counts.begin(),
                                       truth.counts.begin() +
                                           static_cast<std::ptrdiff_t>(forecasts.size()));
    for (std::size_t i = 0; i < forecasts.size(); ++i) {
      if (truth.index.times[i] != forecasts[i].t_new) {
        lgpc::fail(lgpc::ErrorCode::Validation, "truth and forecast times differ at row " +
                                                    std::to_string(i + 1));
      }
    }
    const lgpc::ScoreReport report = lgpc::score_forecasts(forecasts, observed);
    lgpc::RunManifest m;
    m.command = "score";
    m.config = nlohmann::json::object();
    m.input_digest = truth_digest;
    m.seed = fm.seed;
    m.extra = {{"forecast_input_digest", fm.input_digest}};
    if (req->out_path) lgpc::write_file(req->out_path, lgpc::score_table(report, m));
    if (out) *out = lgpc_scores{report.brier, report.spherical, report.rps, report.rmse};
  });
}

}  // extern "C"
