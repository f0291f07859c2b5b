#pragma once

#include "lgpc/covariance.hpp"
#include "lgpc/error.hpp"
#include "lgpc/random.hpp"
#include "lgpc/series.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace lgpc {

/// Read-only quantities shared by every chain of one fit. Holds non-owning
/// references: the series and factor must outlive the context.
struct ConditionalContext {
  ConditionalContext(const ObservedSeries& series, const CorrelationFactor& factor,
                     const ModelConfig& config);

  const ObservedSeries& series;
  const CorrelationFactor& factor;
  const ModelConfig& config;

  Eigen::VectorXd y;
  Eigen::MatrixXd xtx;
  Eigen::MatrixXd xtx_inv;
  Eigen::MatrixXd xtx_inv_chol;  // lower factor of (X'X)^-1
};

struct InverseGammaParams {
  double shape;
  double scale;
};

struct GaussianMoments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

// Closed-form conditional parameters; the update_* functions draw from them.
InverseGammaParams sigma2_conditional(const ConditionalContext& ctx, const ChainState& state);
InverseGammaParams sigmaw2_conditional(const ConditionalContext& ctx, const ChainState& state);
GaussianMoments beta_conditional(const ConditionalContext& ctx, const ChainState& state);
/// Mean and covariance of w | rest, assembled in the eigenbasis of Sigma_w.
GaussianMoments w_conditional(const ConditionalContext& ctx, const ChainState& state);

double update_sigma2(RngStream& rng, const ConditionalContext& ctx, const ChainState& state);
double update_sigmaw2(RngStream& rng, const ConditionalContext& ctx, const ChainState& state);
Eigen::VectorXd update_beta(RngStream& rng, const ConditionalContext& ctx, const ChainState& state);
Eigen::VectorXd update_w(RngStream& rng, const ConditionalContext& ctx, const ChainState& state);
Eigen::VectorXd update_mu(RngStream& rng, const ConditionalContext& ctx, const ChainState& state);

/// log pi(mu | y, c, sigma2) = -(mu - c)^2 / (2 sigma2) + y mu - exp(mu), where
/// c = x'beta + w. Same as the centred form up to a constant.
double mu_log_density(double mu, double c, double y, double sigma2);

/// Mode of mu_log_density (strictly concave, so unique).
double mu_conditional_mode(double c, double y, double sigma2);

/// One ARMS transition for a single mu component.
double sample_mu_component(RngStream& rng, double c, double y, double sigma2, double current);

/// One full sweep in the fixed order: variances, beta, w, mu.
void gibbs_sweep(RngStream& rng, const ConditionalContext& ctx, ChainState& state);

/// Potential scale reduction factor of one scalar, floored at 1.
/// Throws InsufficientData unless there are >= 2 chains of >= 10 values.
double gelman_rubin(const std::vector<std::vector<double>>& chains);

struct GelmanRubinReport {
  std::vector<double> factors;  // beta..., log sigma2, log sigmaw2
  double max_statistic = 0.0;
  int sweeps = 0;
};

/// Monitored scalars of a state: each beta component, log sigma2, log sigmaw2.
std::vector<double> monitored_scalars(const ChainState& state);

/// traces[chain][draw][scalar].
GelmanRubinReport gelman_rubin_report(const std::vector<std::vector<std::vector<double>>>& traces,
                                      int sweeps);

/// Thrown when R-hat stays above threshold for max_burn_sweeps.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<GrPoint> history)
      : Error(ErrorCode::ConvergenceFailure, what), history_(std::move(history)) {}
  const std::vector<GrPoint>& history() const noexcept { return history_; }

 private:
  std::vector<GrPoint> history_;
};

/// Overdispersed start: least squares of log(y+1) on X plus N(0, 0.5^2)
/// jitter, variances from the IG(a, b) prior, w = 0, mu = X beta.
ChainState initial_state(RngStream& rng, const ConditionalContext& ctx);

/// Multi-chain sampler. `stream_tag` separates the random streams of fits that
/// share a root seed (e.g. one tag per phi in cross-validation).
PosteriorSamples run_sampler(const ObservedSeries& series, const ModelConfig& config,
                             const CorrelationFactor& factor, std::uint64_t stream_tag = 0);

}  // namespace lgpc
