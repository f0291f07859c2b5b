#pragma once

#include "lgpc/error.hpp"
#include "lgpc/random.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace lgpc {

/// Univariate log-density (up to a constant) on a bounded interval, with the
/// starting abscissae for the envelope.
struct ArmsTarget {
  std::function<double(double)> log_density;
  double lower = 0.0;
  double upper = 0.0;
  std::vector<double> abscissae;
};

inline constexpr std::size_t kArmsMaxPoints = 48;
inline constexpr int kArmsMaxRejections = 10000;

namespace detail {

/// Piecewise-linear (in log space) envelope through the abscissae, built from
/// secant lines as in derivative-free adaptive rejection sampling:
/// on [x_i, x_i+1] it is max(L_i,i+1, min(L_i-1,i, L_i+1,i+2)), and the two
/// outer intervals extend the nearest secant. For log-concave targets it is a
/// true upper hull; otherwise the Metropolis step corrects.
class ArmsEnvelope {
 public:
  ArmsEnvelope(double lower, double upper) : lower_(lower), upper_(upper) {}

  void insert(double x, double h);
  std::size_t points() const noexcept { return n_points_; }
  void rebuild();

  /// Draws from the normalized exp(envelope); writes the envelope value there.
  double sample(RngStream& rng, double& envelope_value) const;
  double evaluate(double x) const;

 private:
  struct Piece {
    double x0, x1, y0, y1;
  };
  // Each interval splits into at most four linear pieces.
  static constexpr std::size_t kMaxPieces = 4 * (kArmsMaxPoints + 1);

  double lower_, upper_;
  std::size_t n_points_ = 0;
  std::array<double, kArmsMaxPoints> xs_{}, hs_{};
  std::size_t n_pieces_ = 0;
  std::array<Piece, kMaxPieces> pieces_{};
  std::array<double, kMaxPieces> cumulative_{};
};

}  // namespace detail

/// One ARMS transition from `current`. For log-concave targets the envelope
/// dominates and the Metropolis step always accepts.
template <typename LogDensity>
double sample_arms(RngStream& rng, LogDensity&& log_density, double lower, double upper,
                   std::span<const double> abscissae, double current) {
  if (!(lower < upper) || !std::isfinite(lower) || !std::isfinite(upper)) {
    fail(ErrorCode::InvalidParameter, "ARMS domain must be a finite, non-empty interval");
  }
  if (!(current >= lower && current <= upper)) {
    fail(ErrorCode::InvalidParameter, "ARMS current value outside domain");
  }
  auto eval = [&](double x) {
    const double h = log_density(x);
    if (!std::isfinite(h)) fail(ErrorCode::EnvelopeFailure, "non-finite log-density in ARMS");
    return h;
  };

  detail::ArmsEnvelope env(lower, upper);
  double prev = lower;
  for (double x : abscissae) {
    if (!(x > prev && x < upper)) {
      fail(ErrorCode::InvalidParameter, "ARMS abscissae must be increasing and inside the domain");
    }
    env.insert(x, eval(x));
    prev = x;
  }
  if (env.points() < 3) fail(ErrorCode::InvalidParameter, "ARMS needs at least 3 abscissae");
  env.rebuild();

  double proposal = 0.0, h_proposal = 0.0, env_proposal = 0.0;
  for (int attempt = 0;; ++attempt) {
    if (attempt >= kArmsMaxRejections) {
      fail(ErrorCode::EnvelopeFailure, "ARMS rejection limit reached");
    }
    proposal = env.sample(rng, env_proposal);
    h_proposal = eval(proposal);
    if (std::log(rng.uniform()) <= h_proposal - env_proposal) break;
    if (env.points() < kArmsMaxPoints) {
      env.insert(proposal, h_proposal);
      env.rebuild();
    }
  }

  // Metropolis correction against the final envelope.
  const double h_current = eval(current);
  const double env_current = env.evaluate(current);
  const double log_ratio = (h_proposal + std::min(h_current, env_current)) -
                           (h_current + std::min(h_proposal, env_proposal));
  if (log_ratio >= 0.0 || std::log(rng.uniform()) <= log_ratio) return proposal;
  return current;
}

double sample_arms(RngStream& rng, const ArmsTarget& target, double current);

}  // namespace lgpc
