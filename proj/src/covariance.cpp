#include "lgpc/covariance.hpp"

#include "lgpc/error.hpp"

#include <cmath>
#include <string>

namespace lgpc {

namespace {

constexpr double kJitter = 1e-10;
// Smallest acceptable squared Cholesky pivot.
constexpr double kPivotFloor = 1e-12;

bool try_cholesky(const Eigen::MatrixXd& a, Eigen::MatrixXd& lower) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) return false;
  lower = llt.matrixL();
  for (Eigen::Index i = 0; i < lower.rows(); ++i) {
    const double pivot = lower(i, i);
    if (!std::isfinite(pivot) || pivot * pivot <= kPivotFloor) return false;
  }
  return true;
}

}  // namespace

CorrelationFactor build_correlation(const TimeIndex& index, double phi) {
  if (!(phi > 0.0) || !std::isfinite(phi)) {
    fail(ErrorCode::InvalidParameter, "phi must be positive and finite");
  }
  const auto T = static_cast<Eigen::Index>(index.size());
  if (T < 1) fail(ErrorCode::InvalidParameter, "empty time index");
  for (Eigen::Index i = 0; i + 1 < T; ++i) {
    if (!(index.times[static_cast<std::size_t>(i)] < index.times[static_cast<std::size_t>(i + 1)])) {
      fail(ErrorCode::Validation, "times not strictly increasing");
    }
  }

  CorrelationFactor f;
  f.phi_ = phi;
  f.index_ = index;
  f.matrix_.resize(T, T);
  for (Eigen::Index i = 0; i < T; ++i) {
    f.matrix_(i, i) = 1.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double c = std::exp(-phi * index.distance(static_cast<std::size_t>(i),
                                                      static_cast<std::size_t>(j)));
      f.matrix_(i, j) = c;
      f.matrix_(j, i) = c;
    }
  }

  if (!try_cholesky(f.matrix_, f.chol_)) {
    f.matrix_.diagonal().array() += kJitter;
    f.jitter_ = kJitter;
    if (!try_cholesky(f.matrix_, f.chol_)) {
      fail(ErrorCode::CholeskyFailure,
           "correlation matrix not positive definite (phi=" + std::to_string(phi) +
               "); near-duplicate time stamps?");
    }
  }
  f.logdet_ = 2.0 * f.chol_.diagonal().array().log().sum();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(f.matrix_);
  if (eig.info() != Eigen::Success) {
    fail(ErrorCode::CholeskyFailure, "eigendecomposition of correlation matrix failed");
  }
  f.eigenvalues_ = eig.eigenvalues();
  f.eigenvectors_ = eig.eigenvectors();
  // Positive definiteness was established by the Cholesky pass; guard the
  // smallest eigenvalues against roundoff below zero.
  const double floor = kJitter * 1e-3;
  for (Eigen::Index i = 0; i < T; ++i) {
    if (f.eigenvalues_[i] < floor) f.eigenvalues_[i] = floor;
  }
  return f;
}

Eigen::VectorXd solve(const CorrelationFactor& factor, const Eigen::VectorXd& v) {
  if (v.size() != factor.size()) {
    fail(ErrorCode::DimensionMismatch, "solve: vector length does not match index");
  }
  const auto L = factor.chol().triangularView<Eigen::Lower>();
  Eigen::VectorXd y = L.solve(v);
  return L.transpose().solve(y);
}

double quadratic_form(const CorrelationFactor& factor, const Eigen::VectorXd& w) {
  if (w.size() != factor.size()) {
    fail(ErrorCode::DimensionMismatch, "quadratic_form: vector length does not match index");
  }
  Eigen::VectorXd y = factor.chol().triangularView<Eigen::Lower>().solve(w);
  return y.squaredNorm();
}

Eigen::VectorXd cross_correlation(const TimeIndex& index, double phi, double t_new) {
  if (!(phi > 0.0)) fail(ErrorCode::InvalidParameter, "phi must be positive");
  Eigen::VectorXd c(static_cast<Eigen::Index>(index.size()));
  for (std::size_t j = 0; j < index.size(); ++j) {
    c[static_cast<Eigen::Index>(j)] = std::exp(-phi * std::abs(index.times[j] - t_new));
  }
  return c;
}

}  // namespace lgpc
