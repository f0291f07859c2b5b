#include "lgpc/series.hpp"

#include "lgpc/error.hpp"

#include <cmath>
#include <sstream>

namespace lgpc {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::Validation: return "Validation";
    case ErrorCode::CholeskyFailure: return "CholeskyFailure";
    case ErrorCode::EnvelopeFailure: return "EnvelopeFailure";
    case ErrorCode::NonStationaryCoefficients: return "NonStationaryCoefficients";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::EmptyPosterior: return "EmptyPosterior";
    case ErrorCode::InvalidPmf: return "InvalidPmf";
    case ErrorCode::Divergence: return "Divergence";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::Schema: return "SchemaError";
    case ErrorCode::Io: return "IoError";
  }
  return "Unknown";
}

double TimeIndex::distance(std::size_t i, std::size_t j) const {
  return std::abs(times[i] - times[j]);
}

ObservedSeries ObservedSeries::slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > length()) {
    fail(ErrorCode::DimensionMismatch, "slice out of range");
  }
  ObservedSeries out;
  out.index.times.assign(index.times.begin() + static_cast<std::ptrdiff_t>(begin),
                         index.times.begin() + static_cast<std::ptrdiff_t>(end));
  out.counts.assign(counts.begin() + static_cast<std::ptrdiff_t>(begin),
                    counts.begin() + static_cast<std::ptrdiff_t>(end));
  out.design = design.middleRows(static_cast<Eigen::Index>(begin),
                                 static_cast<Eigen::Index>(end - begin));
  out.column_names = column_names;
  return out;
}

Eigen::VectorXd ObservedSeries::counts_as_vector() const {
  Eigen::VectorXd y(static_cast<Eigen::Index>(counts.size()));
  for (std::size_t i = 0; i < counts.size(); ++i) {
    y[static_cast<Eigen::Index>(i)] = static_cast<double>(counts[i]);
  }
  return y;
}

std::vector<std::string> validate_series(const ObservedSeries& series) {
  std::vector<std::string> violations;
  const std::size_t T = series.index.size();

  if (T < 2) violations.emplace_back("time index shorter than 2");
  for (double t : series.index.times) {
    if (!std::isfinite(t)) {
      violations.emplace_back("non-finite time stamp");
      break;
    }
  }
  for (std::size_t i = 0; i + 1 < T; ++i) {
    if (!(series.index.times[i] < series.index.times[i + 1])) {
      violations.emplace_back("times not strictly increasing");
      break;
    }
  }

  const bool sizes_ok = series.counts.size() == T &&
                        static_cast<std::size_t>(series.design.rows()) == T;
  if (!sizes_ok) violations.emplace_back("counts, times and design rows differ in length");

  for (auto y : series.counts) {
    if (y < 0) {
      violations.emplace_back("negative count");
      break;
    }
  }

  if (!series.design.allFinite()) {
    violations.emplace_back("non-finite design entry");
  } else if (series.design.cols() == 0) {
    violations.emplace_back("design has no columns");
  } else if (sizes_ok && T > 0) {
    if (series.design.cols() > series.design.rows()) {
      violations.emplace_back("design rank-deficient");
    } else {
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(series.design);
      qr.setThreshold(1e-10);
      if (qr.rank() < series.design.cols()) {
        violations.emplace_back("design rank-deficient");
      }
    }
  }
  return violations;
}

void require_valid(const ObservedSeries& series) {
  auto violations = validate_series(series);
  if (violations.empty()) return;
  std::ostringstream os;
  os << "invalid series:";
  for (const auto& v : violations) os << ' ' << v << ';';
  fail(ErrorCode::Validation, os.str());
}

const char* to_string(Criterion c) noexcept {
  switch (c) {
    case Criterion::Rps: return "rps";
    case Criterion::Brier: return "brier";
    case Criterion::Spherical: return "spherical";
    case Criterion::Rmse: return "rmse";
  }
  return "rps";
}

Criterion parse_criterion(const std::string& name) {
  if (name == "rps") return Criterion::Rps;
  if (name == "brier") return Criterion::Brier;
  if (name == "spherical") return Criterion::Spherical;
  if (name == "rmse") return Criterion::Rmse;
  fail(ErrorCode::InvalidParameter, "unknown criterion '" + name + "'");
}

void ModelConfig::validate() const {
  auto bad = [](const std::string& what) { fail(ErrorCode::InvalidParameter, what); };
  if (!(prior_shape > 2.0)) bad("prior_shape must exceed 2");
  if (!(prior_scale > 0.0)) bad("prior_scale must be positive");
  if (!(phi > 0.0) || !std::isfinite(phi)) bad("phi must be positive");
  for (double p : phi_grid) {
    if (!(p > 0.0) || !std::isfinite(p)) bad("phi_grid entries must be positive");
  }
  if (n_chains < 2) bad("n_chains must be at least 2");
  if (!(gr_threshold > 1.0)) bad("gr_threshold must exceed 1");
  if (gr_check_interval < 10) bad("gr_check_interval must be at least 10");
  if (max_burn_sweeps < gr_check_interval) bad("max_burn_sweeps below gr_check_interval");
  if (thinning <= 10) bad("thinning must exceed 10");
  if (posterior_size < 1) bad("posterior_size must be at least 1");
  if (threads < 0) bad("threads must be non-negative");
  if (!(interval_level > 0.0 && interval_level < 1.0)) bad("interval_level must lie in (0,1)");
  if (!(cv_train_fraction > 0.0 && cv_train_fraction < 1.0)) {
    bad("cv_train_fraction must lie in (0,1)");
  }
}

namespace {
template <typename F>
double mean_of(const std::vector<ChainState>& draws, F f) {
  if (draws.empty()) fail(ErrorCode::EmptyPosterior, "posterior has no draws");
  double s = 0.0;
  for (const auto& d : draws) s += f(d);
  return s / static_cast<double>(draws.size());
}
}  // namespace

Eigen::VectorXd PosteriorSamples::mean_beta() const {
  if (draws.empty()) fail(ErrorCode::EmptyPosterior, "posterior has no draws");
  Eigen::VectorXd m = Eigen::VectorXd::Zero(draws.front().beta.size());
  for (const auto& d : draws) m += d.beta;
  return m / static_cast<double>(draws.size());
}

Eigen::VectorXd PosteriorSamples::mean_mu() const {
  if (draws.empty()) fail(ErrorCode::EmptyPosterior, "posterior has no draws");
  Eigen::VectorXd m = Eigen::VectorXd::Zero(draws.front().mu.size());
  for (const auto& d : draws) m += d.mu;
  return m / static_cast<double>(draws.size());
}

double PosteriorSamples::mean_sigma2() const {
  return mean_of(draws, [](const ChainState& d) { return d.sigma2; });
}

double PosteriorSamples::mean_sigmaw2() const {
  return mean_of(draws, [](const ChainState& d) { return d.sigmaw2; });
}

}  // namespace lgpc
