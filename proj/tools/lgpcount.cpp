// Command-line front end. Talks to the model only through the C API.
#include "lgpc/lgpc.h"

#include "CLI11.hpp"

#include <cstdio>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct ConfigFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> phi;
  std::string phi_grid;
  std::optional<int> chains;
  std::optional<int> thin;
  std::optional<int> samples;
  std::optional<int> threads;
  std::string criterion;
};

struct DataFlags {
  std::string data;
  bool no_intercept = false;
  bool trend = false;
  std::string season_col;
  std::string time_col = "time";
  std::string count_col = "y";
};

void add_config_flags(CLI::App* app, ConfigFlags& f) {
  app->add_option("--config", f.config_path, "JSON config file");
  app->add_option("--seed", f.seed, "root random seed");
  app->add_option("--phi", f.phi, "decay of the latent correlation");
  app->add_option("--phi-grid", f.phi_grid, "comma-separated decay candidates for cv");
  app->add_option("--chains", f.chains, "number of chains");
  app->add_option("--thin", f.thin, "keep every m-th sweep");
  app->add_option("--samples", f.samples, "posterior draws to keep");
  app->add_option("--threads", f.threads, "worker threads (0: all hardware threads)");
  app->add_option("--criterion", f.criterion, "cv criterion")
      ->check(CLI::IsMember({"rps", "brier", "spherical", "rmse"}));
}

void add_data_flags(CLI::App* app, DataFlags& f, bool with_data = true) {
  if (with_data) app->add_option("--data", f.data, "input CSV")->required();
  app->add_flag("--no-intercept", f.no_intercept, "do not prepend an intercept column");
  app->add_flag("--trend", f.trend, "append a linear trend in time");
  app->add_option("--season-col", f.season_col, "categorical column expanded to indicators");
  app->add_option("--time-col", f.time_col, "name of the time column");
  app->add_option("--count-col", f.count_col, "name of the count column");
}

lgpc_csv_options csv_of(const DataFlags& f) {
  lgpc_csv_options o = lgpc_csv_options_default();
  o.time_column = f.time_col.c_str();
  o.count_column = f.count_col.c_str();
  o.intercept = f.no_intercept ? 0 : 1;
  o.trend = f.trend ? 1 : 0;
  o.season_column = f.season_col.empty() ? nullptr : f.season_col.c_str();
  return o;
}

int report(lgpc_status status) {
  if (status != LGPC_OK) std::fprintf(stderr, "%s\n", lgpc_last_error_json());
  return static_cast<int>(status);
}

int usage_error(const std::string& message) {
  std::string escaped;
  for (char c : message) {
    if (c == '"' || c == '\\') escaped += '\\';
    escaped += c == '\n' ? ' ' : c;
  }
  std::fprintf(stderr, "{\"status\":2,\"kind\":\"Usage\",\"message\":\"%s\"}\n", escaped.c_str());
  return LGPC_ERR_VALIDATION;
}

bool parse_grid(const std::string& text, std::vector<double>& grid) {
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      grid.push_back(std::stod(item, &used));
      if (used != item.size()) return false;
    } catch (const std::exception&) {
      return false;
    }
  }
  return !grid.empty();
}

using ConfigPtr = std::unique_ptr<lgpc_config, decltype(&lgpc_config_free)>;

// Config file first, then individual flags on top.
lgpc_status build_config(const ConfigFlags& f, ConfigPtr& cfg) {
  if (!f.config_path.empty()) {
    if (lgpc_status s = lgpc_config_load(cfg.get(), f.config_path.c_str()); s != LGPC_OK) return s;
  }
  if (f.seed) lgpc_config_set_seed(cfg.get(), *f.seed);
  if (f.phi) lgpc_config_set_phi(cfg.get(), *f.phi);
  if (f.chains) lgpc_config_set_chains(cfg.get(), *f.chains);
  if (f.thin) lgpc_config_set_thinning(cfg.get(), *f.thin);
  if (f.samples) lgpc_config_set_samples(cfg.get(), *f.samples);
  if (f.threads) lgpc_config_set_threads(cfg.get(), *f.threads);
  if (!f.criterion.empty()) {
    if (lgpc_status s = lgpc_config_set_criterion(cfg.get(), f.criterion.c_str()); s != LGPC_OK) {
      return s;
    }
  }
  if (!f.phi_grid.empty()) {
    std::vector<double> grid;
    if (!parse_grid(f.phi_grid, grid)) return LGPC_ERR_VALIDATION;
    lgpc_config_set_phi_grid(cfg.get(), grid.data(), grid.size());
  }
  return lgpc_config_validate(cfg.get());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Latent Gaussian process Poisson regression for count time series"};
  app.set_version_flag("--version", lgpc_version());
  app.require_subcommand(1);

  ConfigFlags cf;
  DataFlags df;
  bool timings = false;

  auto* fit = app.add_subcommand("fit", "sample the posterior and report fit metrics");
  std::string draws_out = "draws.csv", metrics_out = "metrics.csv";
  add_config_flags(fit, cf);
  add_data_flags(fit, df);
  fit->add_option("--draws-out", draws_out, "posterior draws table");
  fit->add_option("--metrics-out", metrics_out, "fit metrics table");
  fit->add_flag("--timings", timings, "record wall-clock timings in the manifest");

  auto* cv = app.add_subcommand("cv", "choose the decay by forecasting a held-out tail");
  std::string cv_out = "cv.csv";
  add_config_flags(cv, cf);
  add_data_flags(cv, df);
  cv->add_option("--out", cv_out, "per-candidate score table");
  cv->add_flag("--timings", timings, "record wall-clock timings in the manifest");

  auto* fc = app.add_subcommand("forecast", "predictive distributions for future time points");
  std::string draws_in, future, fc_out = "forecast.csv", pmf_out = "pmf.csv";
  std::size_t horizon = 0;
  add_config_flags(fc, cf);
  add_data_flags(fc, df);
  fc->add_option("--draws", draws_in, "posterior draws from fit (omit to fit here)");
  fc->add_option("--future", future, "CSV of future times and covariates")->required();
  fc->add_option("--horizon", horizon, "number of future rows to forecast (0: all)");
  fc->add_option("--out", fc_out, "point and interval table");
  fc->add_option("--pmf-out", pmf_out, "long-form pmf table");
  fc->add_flag("--timings", timings, "record wall-clock timings in the manifest");

  auto* sim = app.add_subcommand("simulate", "simulation study against the Poisson GLM");
  int dgp = 1, reps = 50, length = 100;
  bool no_cv = false;
  std::string mse_out = "study_mse.csv", scores_out = "study_scores.csv", reps_out;
  add_config_flags(sim, cf);
  sim->add_option("--dgp", dgp, "error process: 1 iid normal, 2 AR(3), 3 AR(1) + t5")
      ->check(CLI::Range(1, 3));
  sim->add_option("--reps", reps, "replications")->check(CLI::PositiveNumber);
  sim->add_option("--length", length, "series length")->check(CLI::PositiveNumber);
  sim->add_flag("--no-cv", no_cv, "use --phi instead of cross-validating each replication");
  sim->add_option("--mse-out", mse_out, "coefficient MSE table");
  sim->add_option("--scores-out", scores_out, "mean score table");
  sim->add_option("--replications-out", reps_out, "per-replication estimates");
  sim->add_flag("--timings", timings, "record wall-clock timings in the manifest");

  auto* sc = app.add_subcommand("score", "score a forecast against realized counts");
  std::string sc_forecast, sc_pmf, sc_truth, sc_out = "score.csv";
  add_data_flags(sc, df, false);
  sc->add_option("--forecast", sc_forecast, "forecast table")->required();
  sc->add_option("--pmf", sc_pmf, "pmf table")->required();
  sc->add_option("--truth", sc_truth, "the future file, with counts filled in")->required();
  sc->add_option("--out", sc_out, "score table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return usage_error(e.what());
  }

  ConfigPtr cfg(lgpc_config_new(), &lgpc_config_free);
  if (!cfg) return report(LGPC_ERR_INTERNAL);
  if (!cf.phi_grid.empty()) {
    std::vector<double> grid;
    if (!parse_grid(cf.phi_grid, grid)) return usage_error("--phi-grid: expected numbers separated by commas");
  }
  if (!sc->parsed()) {
    if (lgpc_status s = build_config(cf, cfg); s != LGPC_OK) return report(s);
  }
  const lgpc_csv_options csv = csv_of(df);

  if (fit->parsed()) {
    lgpc_fit_request req{df.data.c_str(), csv, draws_out.c_str(), metrics_out.c_str(), timings};
    return report(lgpc_cmd_fit(&req, cfg.get()));
  }
  if (cv->parsed()) {
    lgpc_cv_request req{df.data.c_str(), csv, cv_out.c_str(), timings};
    double phi = 0.0;
    const lgpc_status s = lgpc_cmd_cv(&req, cfg.get(), &phi);
    if (s == LGPC_OK) std::printf("phi_opt %.17g\n", phi);
    return report(s);
  }
  if (fc->parsed()) {
    lgpc_forecast_request req{df.data.c_str(),
                              csv,
                              draws_in.empty() ? nullptr : draws_in.c_str(),
                              future.c_str(),
                              horizon,
                              fc_out.c_str(),
                              pmf_out.c_str(),
                              timings};
    return report(lgpc_cmd_forecast(&req, cfg.get()));
  }
  if (sim->parsed()) {
    lgpc_simulate_request req{dgp,
                              reps,
                              length,
                              no_cv ? 0 : 1,
                              mse_out.c_str(),
                              scores_out.c_str(),
                              reps_out.empty() ? nullptr : reps_out.c_str(),
                              timings};
    return report(lgpc_cmd_simulate(&req, cfg.get()));
  }
  lgpc_score_request req{sc_forecast.c_str(), sc_pmf.c_str(), sc_truth.c_str(), csv,
                         sc_out.c_str()};
  lgpc_scores scores{};
  const lgpc_status s = lgpc_cmd_score(&req, &scores);
  if (s == LGPC_OK) {
    std::printf("brier %.6f\nspherical %.6f\nrps %.6f\nrmse %.6f\n", scores.brier,
                scores.spherical, scores.rps, scores.rmse);
  }
  return report(s);
}
