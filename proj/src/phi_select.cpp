#include "lgpc/phi_select.hpp"

#include "lgpc/covariance.hpp"
#include "lgpc/error.hpp"
#include "lgpc/forecast.hpp"
#include "lgpc/gibbs.hpp"
#include "lgpc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lgpc {

CvPlan CvPlan::from_config(const ModelConfig& config) {
  return {config.phi_grid, config.cv_train_fraction, config.criterion};
}

double argmin_phi(const std::vector<CvRow>& table) {
  double best_phi = std::numeric_limits<double>::quiet_NaN();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& row : table) {
    if (!row.ok) continue;
    if (row.value < best || (row.value == best && row.phi < best_phi)) {
      best = row.value;
      best_phi = row.phi;
    }
  }
  if (std::isnan(best_phi)) fail(ErrorCode::ConvergenceFailure, "no phi candidate could be fitted");
  return best_phi;
}

CvResult select_phi(const ObservedSeries& series, const ModelConfig& config, const CvPlan& plan) {
  config.validate();
  require_valid(series);
  if (plan.grid.empty()) fail(ErrorCode::InvalidParameter, "empty phi grid");
  for (double p : plan.grid) {
    if (!(p > 0.0)) fail(ErrorCode::InvalidParameter, "phi grid entries must be positive");
  }
  const std::size_t T = series.length();
  const auto n_train = static_cast<std::size_t>(std::lround(plan.train_fraction * static_cast<double>(T)));
  const std::size_t min_train = std::max<std::size_t>(3 * series.columns(), 20);
  if (n_train < min_train || n_train >= T) {
    fail(ErrorCode::InsufficientData, "series too short for cross-validation");
  }

  const ObservedSeries train = series.slice(0, n_train);
  const ObservedSeries validation = series.slice(n_train, T);

  CvResult result;
  result.criterion = plan.criterion;
  result.n_train = n_train;
  result.n_validation = T - n_train;
  result.table.resize(plan.grid.size());

  // Candidates run concurrently; each fit then runs its chains serially.
  const int outer = std::min<int>(resolve_threads(config.threads), static_cast<int>(plan.grid.size()));
  parallel_for(plan.grid.size(), outer, [&](std::size_t i) {
    CvRow& row = result.table[i];
    row.phi = plan.grid[i];
    ModelConfig cfg = config;
    cfg.phi = plan.grid[i];
    cfg.threads = outer > 1 ? 1 : config.threads;
    const std::uint64_t tag = i + 1;
    try {
      const auto factor = build_correlation(train.index, cfg.phi);
      const auto samples = run_sampler(train, cfg, factor, tag);
      row.burn_sweeps = samples.burn_sweeps_used;
      const auto forecasts = forecast_horizon(samples, train, factor, validation.design,
                                              validation.index.times, cfg.seed, tag,
                                              cfg.interval_level, cfg.threads);
      row.scores = score_forecasts(forecasts, validation.counts);
      row.value = row.scores.criterion(plan.criterion);
      row.ok = true;
    } catch (const Error& e) {
      row.ok = false;
      row.error = std::string(to_string(e.code())) + ": " + e.what();
    }
  });

  result.phi_opt = argmin_phi(result.table);
  return result;
}

}  // namespace lgpc
