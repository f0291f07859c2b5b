#pragma once

#include "lgpc/forecast.hpp"
#include "lgpc/series.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace lgpc {

// Negatively oriented proper scoring rules for a pmf over {0, ..., K}.
// Counts beyond K have probability 0.

/// -2 f(y) + ||f||^2. Throws InvalidPmf.
double brier_score(std::span<const double> pmf, std::int64_t y);
/// -f(y) / ||f||. Throws InvalidPmf.
double spherical_score(std::span<const double> pmf, std::int64_t y);
/// sum_k (F(k) - 1{y <= k})^2, summed through max(K, y). Throws InvalidPmf.
double ranked_probability_score(std::span<const double> pmf, std::int64_t y);

/// Mean scores over a forecast horizon.
struct ScoreReport {
  double brier = 0.0;
  double spherical = 0.0;
  double rps = 0.0;
  double rmse = 0.0;  // of the point forecasts
  std::size_t n_points = 0;

  double criterion(Criterion c) const;
};

ScoreReport score_forecasts(const std::vector<PredictiveDistribution>& forecasts,
                            std::span<const std::int64_t> observed);

enum class LoglikMode {
  PosteriorMeanMu,  // evaluate at the posterior mean of mu
  MeanOfDraws,      // average the per-draw Poisson log-likelihood
};

struct FitMetrics {
  double loglik = 0.0;
  double r2 = 0.0;
  double rmse = 0.0;
  Eigen::VectorXd fitted;
};

/// Goodness of fit on the training window with fitted values exp(mean mu).
FitMetrics fit_metrics(const PosteriorSamples& samples, const ObservedSeries& series,
                       LoglikMode mode = LoglikMode::PosteriorMeanMu);

/// sum_t [-exp(eta_t) + eta_t y_t - log y_t!].
double poisson_loglik(const Eigen::VectorXd& eta, const ObservedSeries& series);

}  // namespace lgpc
