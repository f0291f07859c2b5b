#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace lgpc {

/// Observation times. Strictly increasing, possibly irregular; the model
/// only ever uses absolute differences between them.
struct TimeIndex {
  std::vector<double> times;

  std::size_t size() const noexcept { return times.size(); }
  double operator[](std::size_t i) const { return times[i]; }
  double distance(std::size_t i, std::size_t j) const;
};

/// Counts paired with a T x p design matrix over a time index.
struct ObservedSeries {
  TimeIndex index;
  std::vector<std::int64_t> counts;
  Eigen::MatrixXd design;
  std::vector<std::string> column_names;

  std::size_t length() const noexcept { return counts.size(); }
  std::size_t columns() const noexcept {
    return static_cast<std::size_t>(design.cols());
  }

  /// Rows [begin, end) as a new series.
  ObservedSeries slice(std::size_t begin, std::size_t end) const;
  Eigen::VectorXd counts_as_vector() const;
};

/// Returns every violated invariant; empty when the series is usable.
std::vector<std::string> validate_series(const ObservedSeries& series);

/// Throws Validation with the joined violation list if the series is invalid.
void require_valid(const ObservedSeries& series);

enum class Criterion { Rps, Brier, Spherical, Rmse };

const char* to_string(Criterion c) noexcept;
Criterion parse_criterion(const std::string& name);

struct ModelConfig {
  double prior_shape = 3.0;  // a
  double prior_scale = 1.0;  // b
  double phi = 0.25;
  std::vector<double> phi_grid{0.01, 0.1, 0.25, 0.5, 1.0, 1.5, 3.0};
  int n_chains = 4;
  double gr_threshold = 1.5;
  int gr_check_interval = 100;
  int max_burn_sweeps = 50000;
  int thinning = 20;
  int posterior_size = 1000;
  std::uint64_t seed = 20200101;
  int threads = 0;  // 0 = hardware concurrency
  Criterion criterion = Criterion::Rps;
  double interval_level = 0.95;
  double cv_train_fraction = 0.9;

  /// Throws InvalidParameter naming the first offending field.
  void validate() const;
};

struct ChainState {
  Eigen::VectorXd beta;
  double sigma2 = 1.0;
  double sigmaw2 = 1.0;
  Eigen::VectorXd w;
  Eigen::VectorXd mu;
};

struct GrPoint {
  int sweep = 0;
  double statistic = 0.0;
};

struct PosteriorSamples {
  std::vector<ChainState> draws;
  std::vector<int> draw_chain;  // source chain of each draw
  double phi_used = 0.0;
  int burn_sweeps_used = 0;
  std::vector<GrPoint> gr_history;

  std::size_t size() const noexcept { return draws.size(); }
  Eigen::VectorXd mean_beta() const;
  Eigen::VectorXd mean_mu() const;
  double mean_sigma2() const;
  double mean_sigmaw2() const;
};

}  // namespace lgpc
