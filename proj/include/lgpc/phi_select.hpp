#pragma once

#include "lgpc/scoring.hpp"
#include "lgpc/series.hpp"

#include <string>
#include <vector>

namespace lgpc {

/// Chronological split: the first round(train_fraction * T) points train each
/// candidate fit, the tail is forecast and scored.
struct CvPlan {
  std::vector<double> grid{0.01, 0.1, 0.25, 0.5, 1.0, 1.5, 3.0};
  double train_fraction = 0.9;
  Criterion criterion = Criterion::Rps;

  static CvPlan from_config(const ModelConfig& config);
};

struct CvRow {
  double phi = 0.0;
  bool ok = false;
  std::string error;  // why the candidate was excluded
  int burn_sweeps = 0;
  ScoreReport scores;
  double value = 0.0;  // criterion value, meaningful when ok
};

struct CvResult {
  double phi_opt = 0.0;
  Criterion criterion = Criterion::Rps;
  std::size_t n_train = 0;
  std::size_t n_validation = 0;
  std::vector<CvRow> table;
};

/// Fits every grid value on the training segment, scores the validation tail
/// and returns the argmin (ties toward smaller phi). Candidates whose fit
/// fails are kept in the table but excluded; throws ConvergenceFailure if all fail.
CvResult select_phi(const ObservedSeries& series, const ModelConfig& config, const CvPlan& plan);

/// Argmin over successful rows; ties resolve to the smaller phi.
double argmin_phi(const std::vector<CvRow>& table);

}  // namespace lgpc
