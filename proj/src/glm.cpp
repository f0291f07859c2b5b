#include "lgpc/glm.hpp"

#include "lgpc/error.hpp"
#include "lgpc/scoring.hpp"

#include <cmath>

namespace lgpc {

namespace {

double poisson_deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& mu) {
  double d = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double term = y[i] > 0.0 ? y[i] * std::log(y[i] / mu[i]) : 0.0;
    d += 2.0 * (term - (y[i] - mu[i]));
  }
  return d;
}

}  // namespace

GlmFit fit_glm(const ObservedSeries& series, const GlmOptions& options) {
  require_valid(series);
  const auto& X = series.design;
  const Eigen::VectorXd y = series.counts_as_vector();
  if (y.sum() <= 0.0) fail(ErrorCode::InvalidParameter, "all counts are zero");

  // Start from mu = y + 0.1 as is customary for the log link.
  Eigen::VectorXd eta = (y.array() + 0.1).log().matrix();
  Eigen::VectorXd mu = eta.array().exp().matrix();
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(X.cols());
  double dev = poisson_deviance(y, mu);

  GlmFit fit;
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    const Eigen::VectorXd z = eta + ((y - mu).array() / mu.array()).matrix();
    const Eigen::MatrixXd xtwx = X.transpose() * mu.asDiagonal() * X;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(xtwx);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
      fail(ErrorCode::RankDeficient, "weighted normal equations are singular");
    }
    Eigen::VectorXd beta_new = ldlt.solve(X.transpose() * (mu.asDiagonal() * z));
    Eigen::VectorXd eta_new = X * beta_new;
    Eigen::VectorXd mu_new = eta_new.array().exp().matrix();
    double dev_new = poisson_deviance(y, mu_new);

    if (iter > 1) {
      int halvings = 0;
      while (!(dev_new <= dev * (1.0 + 1e-12)) || !std::isfinite(dev_new)) {
        if (++halvings > options.max_step_halvings) {
          fail(ErrorCode::Divergence, "IRLS step halving exhausted");
        }
        beta_new = 0.5 * (beta + beta_new);
        eta_new = X * beta_new;
        mu_new = eta_new.array().exp().matrix();
        dev_new = poisson_deviance(y, mu_new);
      }
    } else if (!std::isfinite(dev_new)) {
      fail(ErrorCode::Divergence, "IRLS produced a non-finite deviance");
    }

    const double change = std::abs(dev_new - dev) / (std::abs(dev_new) + 0.1);
    beta = beta_new;
    eta = eta_new;
    mu = mu_new;
    dev = dev_new;
    fit.deviance_trace.push_back(dev);
    fit.iterations = iter;

    fit.gradient_norm = (X.transpose() * (y - mu)).norm();
    // Roundoff floor of the score for large counts.
    const double grad_floor = 1e-13 * (X.transpose() * y).cwiseAbs().sum();
    if (iter > 1 && change < options.relative_tolerance &&
        (fit.gradient_norm < 1e-8 || fit.gradient_norm < grad_floor)) {
      fit.converged = true;
      break;
    }
  }

  fit.beta_hat = beta;
  const Eigen::MatrixXd info = X.transpose() * mu.asDiagonal() * X;
  const Eigen::MatrixXd cov = info.ldlt().solve(Eigen::MatrixXd::Identity(X.cols(), X.cols()));
  fit.standard_errors = cov.diagonal().cwiseSqrt();
  fit.loglik = poisson_loglik(eta, series);
  return fit;
}

PredictiveDistribution glm_predictive(const GlmFit& fit, const Eigen::VectorXd& x_new,
                                      double t_new, double level) {
  if (!fit.converged) fail(ErrorCode::NotConverged, "GLM fit did not converge");
  if (x_new.size() != fit.beta_hat.size()) {
    fail(ErrorCode::DimensionMismatch, "x_new length differs from coefficients");
  }
  const double log_rate = x_new.dot(fit.beta_hat);
  return poisson_mixture(std::span<const double>(&log_rate, 1), t_new, level);
}

}  // namespace lgpc
