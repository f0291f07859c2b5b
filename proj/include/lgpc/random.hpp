#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

namespace lgpc {

/// Well-known stream purposes. Combined with chain/replication ids so that
/// every consumer of randomness owns an independent, reproducible stream.
enum class StreamPurpose : std::uint64_t {
  ChainInit = 1,
  ChainSweep = 2,
  Forecast = 3,
  Simulation = 4,
  Test = 99,
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Derives a stream id from a list of components (purpose, chain, phi index...).
std::uint64_t stream_id(std::initializer_list<std::uint64_t> parts) noexcept;

/// Single-owner random stream. Identical (root seed, stream id) reproduces an
/// identical draw sequence on every platform: all distributions are
/// implemented here rather than taken from <random>, whose algorithms are
/// implementation-defined.
class RngStream {
 public:
  RngStream(std::uint64_t root_seed, std::uint64_t stream);

  std::uint64_t root_seed() const noexcept { return root_; }
  std::uint64_t stream() const noexcept { return stream_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on (0, 1); never returns 0 or 1.
  double uniform();
  double normal();
  double gamma(double shape);

 private:
  std::uint64_t root_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Density proportional to x^(-shape-1) exp(-scale/x).
double sample_inverse_gamma(RngStream& rng, double shape, double scale);

/// mean + L z with z iid standard normal.
Eigen::VectorXd sample_mvn(RngStream& rng, const Eigen::VectorXd& mean,
                           const Eigen::MatrixXd& chol_of_cov);

std::int64_t sample_poisson(RngStream& rng, double rate);

double sample_student_t(RngStream& rng, double df);

struct Innovations {
  enum class Kind { Normal, StudentT };
  Kind kind = Kind::Normal;
  double df = 5.0;
  double scale = 1.0;

  double draw(RngStream& rng) const;
};

inline constexpr int kArBurnIn = 512;

/// True if every root of 1 - c1 z - ... - cp z^p lies outside the unit circle.
bool ar_is_stationary(const std::vector<double>& coeffs);

/// Stationary AR(p) path of length T; the first kArBurnIn steps are discarded.
/// Throws NonStationaryCoefficients.
std::vector<double> simulate_ar(RngStream& rng, const std::vector<double>& coeffs,
                                const Innovations& innovations, int T);

}  // namespace lgpc
