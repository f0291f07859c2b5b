#include "lgpc/scoring.hpp"

#include "lgpc/error.hpp"

#include <cmath>

namespace lgpc {

namespace {

void check_pmf(std::span<const double> pmf) {
  if (pmf.empty()) fail(ErrorCode::InvalidPmf, "empty pmf");
  double total = 0.0;
  for (double p : pmf) {
    if (!(p >= 0.0) || !std::isfinite(p)) fail(ErrorCode::InvalidPmf, "pmf entry negative or non-finite");
    total += p;
  }
  if (total < 1.0 - 1e-6 || total > 1.0 + 1e-9) {
    fail(ErrorCode::InvalidPmf, "pmf does not sum to 1");
  }
}

double prob_at(std::span<const double> pmf, std::int64_t y) {
  if (y < 0) fail(ErrorCode::InvalidParameter, "negative observed count");
  return static_cast<std::size_t>(y) < pmf.size() ? pmf[static_cast<std::size_t>(y)] : 0.0;
}

double squared_norm(std::span<const double> pmf) {
  double s = 0.0;
  for (double p : pmf) s += p * p;
  return s;
}

}  // namespace

double brier_score(std::span<const double> pmf, std::int64_t y) {
  check_pmf(pmf);
  return -2.0 * prob_at(pmf, y) + squared_norm(pmf);
}

double spherical_score(std::span<const double> pmf, std::int64_t y) {
  check_pmf(pmf);
  return -prob_at(pmf, y) / std::sqrt(squared_norm(pmf));
}

double ranked_probability_score(std::span<const double> pmf, std::int64_t y) {
  check_pmf(pmf);
  if (y < 0) fail(ErrorCode::InvalidParameter, "negative observed count");
  const auto K = static_cast<std::int64_t>(pmf.size()) - 1;
  double cdf = 0.0, total = 0.0;
  for (std::int64_t k = 0; k <= K; ++k) {
    cdf += pmf[static_cast<std::size_t>(k)];
    const double step = y <= k ? 1.0 : 0.0;
    total += (cdf - step) * (cdf - step);
  }
  // Between K and y the CDF is flat at F(K) while the indicator is still 0.
  if (y > K + 1) total += static_cast<double>(y - K - 1) * cdf * cdf;
  return total;
}

double ScoreReport::criterion(Criterion c) const {
  switch (c) {
    case Criterion::Rps: return rps;
    case Criterion::Brier: return brier;
    case Criterion::Spherical: return spherical;
    case Criterion::Rmse: return rmse;
  }
  return rps;
}

ScoreReport score_forecasts(const std::vector<PredictiveDistribution>& forecasts,
                            std::span<const std::int64_t> observed) {
  if (forecasts.size() != observed.size()) {
    fail(ErrorCode::DimensionMismatch, "forecasts and observations differ in length");
  }
  if (forecasts.empty()) fail(ErrorCode::InsufficientData, "nothing to score");
  ScoreReport r;
  double sq = 0.0;
  for (std::size_t i = 0; i < forecasts.size(); ++i) {
    const auto& f = forecasts[i];
    r.brier += brier_score(f.pmf, observed[i]);
    r.spherical += spherical_score(f.pmf, observed[i]);
    r.rps += ranked_probability_score(f.pmf, observed[i]);
    const double e = static_cast<double>(observed[i]) - f.point_forecast;
    sq += e * e;
  }
  const double n = static_cast<double>(forecasts.size());
  r.brier /= n;
  r.spherical /= n;
  r.rps /= n;
  r.rmse = std::sqrt(sq / n);
  r.n_points = forecasts.size();
  return r;
}

double poisson_loglik(const Eigen::VectorXd& eta, const ObservedSeries& series) {
  if (static_cast<std::size_t>(eta.size()) != series.length()) {
    fail(ErrorCode::DimensionMismatch, "linear predictor length differs from series");
  }
  double ll = 0.0;
  for (std::size_t t = 0; t < series.length(); ++t) {
    const double y = static_cast<double>(series.counts[t]);
    const double e = eta[static_cast<Eigen::Index>(t)];
    ll += -std::exp(e) + e * y - std::lgamma(y + 1.0);
  }
  return ll;
}

FitMetrics fit_metrics(const PosteriorSamples& samples, const ObservedSeries& series,
                       LoglikMode mode) {
  if (samples.draws.empty()) fail(ErrorCode::EmptyPosterior, "posterior has no draws");
  const Eigen::VectorXd mu_bar = samples.mean_mu();
  if (static_cast<std::size_t>(mu_bar.size()) != series.length()) {
    fail(ErrorCode::DimensionMismatch, "posterior does not match series length");
  }
  FitMetrics m;
  m.fitted = mu_bar.array().exp().matrix();
  const Eigen::VectorXd y = series.counts_as_vector();
  const double ybar = y.mean();
  const double sse = (y - m.fitted).squaredNorm();
  const double sst = (y.array() - ybar).square().sum();
  m.rmse = std::sqrt(sse / static_cast<double>(y.size()));
  m.r2 = sst > 0.0 ? 1.0 - sse / sst : 0.0;
  if (mode == LoglikMode::PosteriorMeanMu) {
    m.loglik = poisson_loglik(mu_bar, series);
  } else {
    double total = 0.0;
    for (const auto& d : samples.draws) total += poisson_loglik(d.mu, series);
    m.loglik = total / static_cast<double>(samples.draws.size());
  }
  return m;
}

}  // namespace lgpc
