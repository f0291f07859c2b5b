#pragma once

#include "lgpc/random.hpp"
#include "lgpc/scoring.hpp"
#include "lgpc/series.hpp"

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

namespace lgpc {

/// Simulation design: mu_t = b0 + b1 X1 + b2 X2 + eps_t with X1, X2 iid N(0,1)
/// redrawn per replication, regular times 1..T, and the error law set by the
/// DGP id:
///   1: eps iid N(0,1)
///   2: AR(3) with coefficients (0.2, -0.3, 0.1), N(0,1) innovations
///   3: AR(1) with coefficient 0.5 and N(0,1) innovations, plus iid t_5
struct DgpSpec {
  int dgp_id = 1;
  int T = 100;
  std::array<double, 3> beta{0.15, -0.28, 0.18};
  double noise_scale = 1.0;  // 0 switches the error process off

  void validate() const;
};

struct SimulatedSeries {
  ObservedSeries series;
  Eigen::VectorXd true_beta;
  std::vector<double> epsilon;
};

SimulatedSeries generate(RngStream& rng, const DgpSpec& spec);

/// The error process alone, for checking its law.
std::vector<double> generate_errors(RngStream& rng, int dgp_id, int T, double noise_scale = 1.0);

enum class StudyModel { Proposed, Glm };

const char* to_string(StudyModel m) noexcept;

struct StudyOptions {
  int n_reps = 50;
  double holdout_fraction = 0.1;
  bool include_proposed = true;
  bool include_glm = true;
  /// Select phi per replication by cross-validation on the training part;
  /// otherwise use config.phi.
  bool cross_validate = true;
  ModelConfig config;
};

struct ModelEstimate {
  bool ok = false;
  std::string error;
  Eigen::VectorXd beta;
  ScoreReport scores;
  double phi = 0.0;  // proposed model only
};

struct ReplicationRecord {
  int replication = 0;
  ModelEstimate proposed;
  ModelEstimate glm;
};

struct ModelSummary {
  StudyModel model;
  std::array<double, 3> mse{};
  ScoreReport mean_scores;
  int n_ok = 0;
  int n_failed = 0;
};

struct StudyTable {
  DgpSpec spec;
  std::vector<ModelSummary> summaries;
  std::vector<ReplicationRecord> records;

  const ModelSummary& summary(StudyModel m) const;
};

/// Replication r uses streams derived from (config.seed, r). Failed
/// replications are excluded per model and counted.
StudyTable run_study(const DgpSpec& spec, const StudyOptions& options);

/// Recomputes per-model aggregates from the stored replication records.
std::vector<ModelSummary> summarize_study(const std::vector<ReplicationRecord>& records,
                                          const DgpSpec& spec, const StudyOptions& options);

}  // namespace lgpc
