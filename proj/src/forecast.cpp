#include "lgpc/forecast.hpp"

#include "lgpc/error.hpp"
#include "lgpc/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace lgpc {

namespace {

// Conditional-mean weights Sigma^-1 c and the unit-variance reduction c' Sigma^-1 c.
struct KrigingWeights {
  Eigen::VectorXd weights;
  double explained;
};

KrigingWeights kriging_weights(const CorrelationFactor& factor, double t_new) {
  for (double t : factor.index().times) {
    if (t == t_new) fail(ErrorCode::InvalidParameter, "forecast time coincides with an observed time");
  }
  const Eigen::VectorXd c = cross_correlation(factor.index(), factor.phi(), t_new);
  Eigen::VectorXd a = solve(factor, c);
  const double explained = c.dot(a);
  return {std::move(a), explained};
}

// Adds (1/S) Poisson(rate) into acc over the window where it is not negligible.
void accumulate_poisson(std::vector<double>& acc, double rate, double weight) {
  if (rate <= 0.0) {
    if (acc.empty()) acc.resize(1, 0.0);
    acc[0] += weight;
    return;
  }
  constexpr double kNegligible = 1e-17;
  const double mode_d = std::floor(rate);
  if (mode_d > static_cast<double>(kMaxPmfSupport)) {
    fail(ErrorCode::InvalidParameter, "predictive support too large");
  }
  const auto mode = static_cast<std::size_t>(mode_d);
  const double log_rate = std::log(rate);
  const double p_mode = std::exp(-rate + mode_d * log_rate - std::lgamma(mode_d + 1.0));

  std::size_t hi = mode;
  {
    double p = p_mode;
    while (true) {
      const double next = p * rate / static_cast<double>(hi + 1);
      if (next < kNegligible && static_cast<double>(hi + 1) > rate) break;
      p = next;
      ++hi;
      if (hi > kMaxPmfSupport) fail(ErrorCode::InvalidParameter, "predictive support too large");
    }
  }
  if (acc.size() < hi + 1) acc.resize(hi + 1, 0.0);

  double p = p_mode;
  acc[mode] += weight * p;
  for (std::size_t k = mode + 1; k <= hi; ++k) {
    p *= rate / static_cast<double>(k);
    acc[k] += weight * p;
  }
  p = p_mode;
  for (std::size_t k = mode; k > 0; --k) {
    p *= static_cast<double>(k) / rate;
    if (p < kNegligible) break;
    acc[k - 1] += weight * p;
  }
}

}  // namespace

ConditionalNormal w_new_conditional(const CorrelationFactor& factor, const Eigen::VectorXd& w,
                                    double sigmaw2, double t_new) {
  if (w.size() != factor.size()) fail(ErrorCode::DimensionMismatch, "w does not match index");
  const auto kw = kriging_weights(factor, t_new);
  const double var = std::max(0.0, sigmaw2 * (1.0 - kw.explained));
  return {kw.weights.dot(w), var};
}

double sample_w_new(RngStream& rng, const CorrelationFactor& factor, const Eigen::VectorXd& w,
                    double sigmaw2, double t_new) {
  const auto cn = w_new_conditional(factor, w, sigmaw2, t_new);
  return cn.mean + std::sqrt(cn.variance) * rng.normal();
}

PredictiveDistribution poisson_mixture(std::span<const double> log_rates, double t_new,
                                       double level) {
  if (log_rates.empty()) fail(ErrorCode::EmptyPosterior, "no predictive draws");
  if (!(level > 0.0 && level < 1.0)) fail(ErrorCode::InvalidParameter, "level must lie in (0,1)");
  const double weight = 1.0 / static_cast<double>(log_rates.size());

  std::vector<double> acc;
  double mean = 0.0;
  for (double lr : log_rates) {
    if (!std::isfinite(lr) && lr != -HUGE_VAL) {
      fail(ErrorCode::InvalidParameter, "non-finite predictive log-rate");
    }
    const double rate = std::exp(lr);
    accumulate_poisson(acc, rate, weight);
    mean += weight * rate;
  }

  PredictiveDistribution out;
  out.t_new = t_new;
  out.level = level;
  out.point_forecast = mean;

  // Truncate at the first K whose upper tail is below the threshold.
  double cdf = 0.0;
  std::size_t K = acc.size() - 1;
  for (std::size_t k = 0; k < acc.size(); ++k) {
    cdf += acc[k];
    if (1.0 - cdf < kPmfTailMass) {
      K = k;
      break;
    }
  }
  out.pmf.assign(acc.begin(), acc.begin() + static_cast<std::ptrdiff_t>(K + 1));

  const double alpha = 0.5 * (1.0 - level);
  cdf = 0.0;
  bool have_lower = false;
  out.upper = static_cast<std::int64_t>(K);
  for (std::size_t k = 0; k <= K; ++k) {
    cdf += out.pmf[k];
    if (!have_lower && cdf >= alpha) {
      out.lower = static_cast<std::int64_t>(k);
      have_lower = true;
    }
    if (cdf >= 1.0 - alpha) {
      out.upper = static_cast<std::int64_t>(k);
      break;
    }
  }
  return out;
}

PredictiveDistribution predictive_distribution(const PosteriorSamples& samples,
                                               const ObservedSeries& series,
                                               const CorrelationFactor& factor,
                                               const Eigen::VectorXd& x_new, double t_new,
                                               RngStream& rng, double level) {
  if (samples.draws.empty()) fail(ErrorCode::EmptyPosterior, "posterior has no draws");
  if (x_new.size() != static_cast<Eigen::Index>(series.columns())) {
    fail(ErrorCode::DimensionMismatch, "x_new length differs from design columns");
  }
  const auto kw = kriging_weights(factor, t_new);
  const double unexplained = std::max(0.0, 1.0 - kw.explained);

  std::vector<double> log_rates;
  log_rates.reserve(samples.draws.size());
  for (const auto& d : samples.draws) {
    if (d.w.size() != factor.size()) fail(ErrorCode::DimensionMismatch, "draw w does not match index");
    const double w_new =
        kw.weights.dot(d.w) + std::sqrt(d.sigmaw2 * unexplained) * rng.normal();
    const double mu_new = x_new.dot(d.beta) + w_new + std::sqrt(d.sigma2) * rng.normal();
    log_rates.push_back(mu_new);
  }
  return poisson_mixture(log_rates, t_new, level);
}

std::vector<PredictiveDistribution> forecast_horizon(
    const PosteriorSamples& samples, const ObservedSeries& series,
    const CorrelationFactor& factor, const Eigen::MatrixXd& x_future,
    const std::vector<double>& times_future, std::uint64_t seed, std::uint64_t stream_tag,
    double level, int threads) {
  if (static_cast<std::size_t>(x_future.rows()) != times_future.size()) {
    fail(ErrorCode::DimensionMismatch, "future design rows differ from future times");
  }
  const double last = series.index.times.back();
  for (std::size_t i = 0; i < times_future.size(); ++i) {
    if (!(times_future[i] > last) || (i > 0 && !(times_future[i] > times_future[i - 1]))) {
      fail(ErrorCode::InvalidParameter, "forecast times must be increasing and after the data");
    }
  }
  std::vector<PredictiveDistribution> out(times_future.size());
  parallel_for(times_future.size(), threads, [&](std::size_t i) {
    RngStream rng(seed, stream_id({static_cast<std::uint64_t>(StreamPurpose::Forecast),
                                   stream_tag, i}));
    const Eigen::VectorXd x = x_future.row(static_cast<Eigen::Index>(i)).transpose();
    out[i] = predictive_distribution(samples, series, factor, x, times_future[i], rng, level);
  });
  return out;
}

}  // namespace lgpc
