#pragma once

#include "lgpc/forecast.hpp"
#include "lgpc/series.hpp"

#include <Eigen/Dense>

#include <vector>

namespace lgpc {

struct GlmFit {
  Eigen::VectorXd beta_hat;
  Eigen::VectorXd standard_errors;  // from the inverse Fisher information
  bool converged = false;
  int iterations = 0;
  double loglik = 0.0;
  double gradient_norm = 0.0;
  std::vector<double> deviance_trace;
};

struct GlmOptions {
  int max_iterations = 100;
  int max_step_halvings = 10;
  double relative_tolerance = 1e-10;
};

/// Poisson log-link GLM by IRLS with step halving on deviance increase.
/// Throws RankDeficient, Divergence, InvalidParameter (all-zero counts).
GlmFit fit_glm(const ObservedSeries& series, const GlmOptions& options = {});

/// Poisson(exp(x' beta_hat)) pmf, truncated as for the latent-process model.
/// Throws NotConverged.
PredictiveDistribution glm_predictive(const GlmFit& fit, const Eigen::VectorXd& x_new,
                                      double t_new, double level = 0.95);

}  // namespace lgpc
