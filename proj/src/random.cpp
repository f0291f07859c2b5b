#include "lgpc/random.hpp"

#include "lgpc/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace lgpc {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_id(std::initializer_list<std::uint64_t> parts) noexcept {
  std::uint64_t h = 0x243F6A8885A308D3ULL;
  for (auto p : parts) h = splitmix64(h ^ splitmix64(p));
  return h;
}

RngStream::RngStream(std::uint64_t root_seed, std::uint64_t stream)
    : root_(root_seed), stream_(stream) {
  const std::uint64_t a = splitmix64(root_seed);
  const std::uint64_t b = splitmix64(a ^ stream);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  engine_.seed(seq);
}

double RngStream::uniform() {
  for (;;) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    if (u > 0.0) return u;
  }
}

double RngStream::normal() {
  // Marsaglia polar method.
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  has_spare_ = true;
  return u * m;
}

double RngStream::gamma(double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    fail(ErrorCode::InvalidParameter, "gamma shape must be positive");
  }
  if (shape < 1.0) {
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform(), 1.0 / shape);
  }
  // Marsaglia & Tsang squeeze method.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_inverse_gamma(RngStream& rng, double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0) || !std::isfinite(shape) || !std::isfinite(scale)) {
    fail(ErrorCode::InvalidParameter, "inverse gamma needs positive shape and scale");
  }
  return scale / rng.gamma(shape);
}

Eigen::VectorXd sample_mvn(RngStream& rng, const Eigen::VectorXd& mean,
                           const Eigen::MatrixXd& chol_of_cov) {
  if (chol_of_cov.rows() != mean.size() || chol_of_cov.cols() != mean.size()) {
    fail(ErrorCode::DimensionMismatch, "sample_mvn: factor does not match mean");
  }
  Eigen::VectorXd z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
  return mean + chol_of_cov.triangularView<Eigen::Lower>() * z;
}

std::int64_t sample_poisson(RngStream& rng, double rate) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    fail(ErrorCode::InvalidParameter, "Poisson rate must be finite and non-negative");
  }
  if (rate == 0.0) return 0;
  if (rate < 10.0) {
    const double limit = std::exp(-rate);
    std::int64_t k = 0;
    double prod = rng.uniform();
    while (prod > limit) {
      ++k;
      prod *= rng.uniform();
    }
    return k;
  }
  // Hormann's PTRS transformed rejection with squeeze.
  const double slam = std::sqrt(rate);
  const double loglam = std::log(rate);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + rate + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::int64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
        -rate + k * loglam - std::lgamma(k + 1.0)) {
      return static_cast<std::int64_t>(k);
    }
  }
}

double sample_student_t(RngStream& rng, double df) {
  if (!(df > 0.0)) fail(ErrorCode::InvalidParameter, "t degrees of freedom must be positive");
  const double z = rng.normal();
  const double chi2 = 2.0 * rng.gamma(0.5 * df);
  return z / std::sqrt(chi2 / df);
}

double Innovations::draw(RngStream& rng) const {
  const double e = kind == Kind::Normal ? rng.normal() : sample_student_t(rng, df);
  return scale * e;
}

bool ar_is_stationary(const std::vector<double>& coeffs) {
  const auto p = static_cast<Eigen::Index>(coeffs.size());
  if (p == 0) return true;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index j = 0; j < p; ++j) companion(0, j) = coeffs[static_cast<std::size_t>(j)];
  for (Eigen::Index i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  for (Eigen::Index i = 0; i < p; ++i) {
    if (std::abs(es.eigenvalues()[i]) >= 1.0) return false;
  }
  return true;
}

std::vector<double> simulate_ar(RngStream& rng, const std::vector<double>& coeffs,
                                const Innovations& innovations, int T) {
  if (T < 0) fail(ErrorCode::InvalidParameter, "negative path length");
  if (!ar_is_stationary(coeffs)) {
    fail(ErrorCode::NonStationaryCoefficients, "AR polynomial has a root inside the unit circle");
  }
  const std::size_t p = coeffs.size();
  const std::size_t total = static_cast<std::size_t>(T) + (p > 0 ? kArBurnIn : 0);
  std::vector<double> path(total, 0.0);
  for (std::size_t t = 0; t < total; ++t) {
    double x = innovations.draw(rng);
    for (std::size_t k = 0; k < p && k < t; ++k) x += coeffs[k] * path[t - 1 - k];
    path[t] = x;
  }
  return {path.end() - T, path.end()};
}

}  // namespace lgpc
