#pragma once

#include "lgpc/covariance.hpp"
#include "lgpc/random.hpp"
#include "lgpc/series.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace lgpc {

inline constexpr double kPmfTailMass = 1e-8;
inline constexpr std::size_t kMaxPmfSupport = 10'000'000;

/// Predictive pmf over {0, ..., K}, with K the smallest support whose upper
/// tail mass is below kPmfTailMass.
struct PredictiveDistribution {
  double t_new = 0.0;
  std::vector<double> pmf;
  double point_forecast = 0.0;  // predictive mean
  std::int64_t lower = 0;
  std::int64_t upper = 0;
  double level = 0.95;

  std::int64_t support_max() const noexcept {
    return static_cast<std::int64_t>(pmf.size()) - 1;
  }
};

/// Mean and variance of w(t_new) | w, sigmaw2 under the exponential kernel.
struct ConditionalNormal {
  double mean;
  double variance;
};

ConditionalNormal w_new_conditional(const CorrelationFactor& factor, const Eigen::VectorXd& w,
                                    double sigmaw2, double t_new);

/// Throws InvalidParameter if t_new coincides with an observed time.
double sample_w_new(RngStream& rng, const CorrelationFactor& factor, const Eigen::VectorXd& w,
                    double sigmaw2, double t_new);

/// Equal-weight mixture of Poisson(exp(log_rate_s)), truncated at the tail
/// threshold, with exact mixture mean and a central interval at `level`.
PredictiveDistribution poisson_mixture(std::span<const double> log_rates, double t_new,
                                       double level = 0.95);

PredictiveDistribution predictive_distribution(const PosteriorSamples& samples,
                                               const ObservedSeries& series,
                                               const CorrelationFactor& factor,
                                               const Eigen::VectorXd& x_new, double t_new,
                                               RngStream& rng, double level = 0.95);

/// Independent per-point predictive distributions, each conditioned on the
/// observed window only. Point i uses its own stream derived from
/// (seed, stream_tag, i), so results do not depend on thread scheduling.
std::vector<PredictiveDistribution> forecast_horizon(
    const PosteriorSamples& samples, const ObservedSeries& series,
    const CorrelationFactor& factor, const Eigen::MatrixXd& x_future,
    const std::vector<double>& times_future, std::uint64_t seed, std::uint64_t stream_tag = 0,
    double level = 0.95, int threads = 1);

}  // namespace lgpc
