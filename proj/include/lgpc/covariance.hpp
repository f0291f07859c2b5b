#pragma once

#include "lgpc/series.hpp"

#include <Eigen/Dense>

namespace lgpc {

/// Exponential correlation matrix exp(-phi |t_i - t_j|) over a time index,
/// factored once and shared read-only by every chain.
///
/// Holds both a Cholesky factor (solves, log-determinant, quadratic forms)
/// and a symmetric eigendecomposition. The latter lets the latent-process
/// update form (c1 I + c2 Sigma^-1)^-1 as a diagonal rescale in the
/// eigenbasis instead of refactoring every sweep.
class CorrelationFactor {
 public:
  double phi() const noexcept { return phi_; }
  const TimeIndex& index() const noexcept { return index_; }
  Eigen::Index size() const noexcept { return matrix_.rows(); }

  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  /// Lower-triangular L with matrix() == L L^T.
  const Eigen::MatrixXd& chol() const noexcept { return chol_; }
  double logdet() const noexcept { return logdet_; }
  /// Diagonal jitter that was needed for the factorization (0 normally).
  double jitter() const noexcept { return jitter_; }

  /// Ascending eigenvalues and matching orthonormal eigenvectors (columns).
  const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }
  const Eigen::MatrixXd& eigenvectors() const noexcept { return eigenvectors_; }

 private:
  friend CorrelationFactor build_correlation(const TimeIndex& index, double phi);

  double phi_ = 0.0;
  TimeIndex index_;
  Eigen::MatrixXd matrix_;
  Eigen::MatrixXd chol_;
  double logdet_ = 0.0;
  double jitter_ = 0.0;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
};

/// Throws CholeskyFailure if the matrix is not numerically positive definite
/// even after one 1e-10 diagonal jitter retry.
CorrelationFactor build_correlation(const TimeIndex& index, double phi);

/// Sigma^-1 v.
Eigen::VectorXd solve(const CorrelationFactor& factor, const Eigen::VectorXd& v);

/// w' Sigma^-1 w, computed as ||L^-1 w||^2.
double quadratic_form(const CorrelationFactor& factor, const Eigen::VectorXd& w);

/// Vector with element j equal to exp(-phi |t_j - t_new|).
Eigen::VectorXd cross_correlation(const TimeIndex& index, double phi, double t_new);

}  // namespace lgpc
