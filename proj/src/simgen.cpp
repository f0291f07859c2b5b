#include "lgpc/simgen.hpp"

#include "lgpc/covariance.hpp"
#include "lgpc/error.hpp"
#include "lgpc/forecast.hpp"
#include "lgpc/gibbs.hpp"
#include "lgpc/glm.hpp"
#include "lgpc/parallel.hpp"
#include "lgpc/phi_select.hpp"

#include <cmath>

namespace lgpc {

void DgpSpec::validate() const {
  if (dgp_id < 1 || dgp_id > 3) fail(ErrorCode::InvalidParameter, "dgp must be 1, 2 or 3");
  if (T < 20) fail(ErrorCode::InvalidParameter, "simulation length must be at least 20");
  if (!(noise_scale >= 0.0)) fail(ErrorCode::InvalidParameter, "noise scale must be non-negative");
}

const char* to_string(StudyModel m) noexcept {
  return m == StudyModel::Proposed ? "proposed" : "glm";
}

std::vector<double> generate_errors(RngStream& rng, int dgp_id, int T, double noise_scale) {
  std::vector<double> eps;
  switch (dgp_id) {
    case 1:
      eps = simulate_ar(rng, {}, Innovations{}, T);
      break;
    case 2:
      eps = simulate_ar(rng, {0.2, -0.3, 0.1}, Innovations{}, T);
      break;
    case 3: {
      eps = simulate_ar(rng, {0.5}, Innovations{}, T);
      const Innovations t5{Innovations::Kind::StudentT, 5.0, 1.0};
      for (auto& e : eps) e += t5.draw(rng);
      break;
    }
    default:
      fail(ErrorCode::InvalidParameter, "dgp must be 1, 2 or 3");
  }
  for (auto& e : eps) e *= noise_scale;
  return eps;
}

SimulatedSeries generate(RngStream& rng, const DgpSpec& spec) {
  spec.validate();
  const int T = spec.T;
  SimulatedSeries out;
  out.true_beta = Eigen::Vector3d(spec.beta[0], spec.beta[1], spec.beta[2]);

  auto& s = out.series;
  s.design.resize(T, 3);
  s.index.times.resize(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    s.index.times[static_cast<std::size_t>(t)] = t + 1.0;
    s.design(t, 0) = 1.0;
    s.design(t, 1) = rng.normal();
    s.design(t, 2) = rng.normal();
  }
  s.column_names = {"intercept", "x1", "x2"};
  out.epsilon = generate_errors(rng, spec.dgp_id, T, spec.noise_scale);

  s.counts.resize(static_cast<std::size_t>(T));
  const Eigen::VectorXd eta = s.design * out.true_beta;
  for (int t = 0; t < T; ++t) {
    const double mu = eta[t] + out.epsilon[static_cast<std::size_t>(t)];
    s.counts[static_cast<std::size_t>(t)] = sample_poisson(rng, std::exp(mu));
  }
  return out;
}

const ModelSummary& StudyTable::summary(StudyModel m) const {
  for (const auto& s : summaries) {
    if (s.model == m) return s;
  }
  fail(ErrorCode::InvalidParameter, std::string("model not in study: ") + to_string(m));
}

namespace {

ModelEstimate fit_proposed(const ObservedSeries& train, const ObservedSeries& test,
                           const StudyOptions& options, std::uint64_t seed) {
  ModelEstimate est;
  try {
    ModelConfig cfg = options.config;
    cfg.seed = seed;
    cfg.threads = 1;
    if (options.cross_validate) cfg.phi = select_phi(train, cfg, CvPlan::from_config(cfg)).phi_opt;
    est.phi = cfg.phi;
    const auto factor = build_correlation(train.index, cfg.phi);
    const auto samples = run_sampler(train, cfg, factor);
    est.beta = samples.mean_beta();
    const auto fc = forecast_horizon(samples, train, factor, test.design, test.index.times,
                                     cfg.seed, 0, cfg.interval_level, 1);
    est.scores = score_forecasts(fc, test.counts);
    est.ok = true;
  } catch (const Error& e) {
    est.error = std::string(to_string(e.code())) + ": " + e.what();
  }
  return est;
}

ModelEstimate fit_baseline(const ObservedSeries& train, const ObservedSeries& test,
                           double level) {
  ModelEstimate est;
  try {
    const auto fit = fit_glm(train);
    est.beta = fit.beta_hat;
    std::vector<PredictiveDistribution> fc;
    for (std::size_t i = 0; i < test.length(); ++i) {
      const Eigen::VectorXd x = test.design.row(static_cast<Eigen::Index>(i)).transpose();
      fc.push_back(glm_predictive(fit, x, test.index.times[i], level));
    }
    est.scores = score_forecasts(fc, test.counts);
    est.ok = true;
  } catch (const Error& e) {
    est.error = std::string(to_string(e.code())) + ": " + e.what();
  }
  return est;
}

}  // namespace

std::vector<ModelSummary> summarize_study(const std::vector<ReplicationRecord>& records,
                                          const DgpSpec& spec, const StudyOptions& options) {
  std::vector<ModelSummary> out;
  auto summarize = [&](StudyModel model) {
    ModelSummary s;
    s.model = model;
    for (const auto& rec : records) {
      const auto& e = model == StudyModel::Proposed ? rec.proposed : rec.glm;
      if (!e.ok) {
        ++s.n_failed;
        continue;
      }
      ++s.n_ok;
      for (int j = 0; j < 3; ++j) {
        const double d = e.beta[j] - spec.beta[static_cast<std::size_t>(j)];
        s.mse[static_cast<std::size_t>(j)] += d * d;
      }
      s.mean_scores.brier += e.scores.brier;
      s.mean_scores.spherical += e.scores.spherical;
      s.mean_scores.rps += e.scores.rps;
      s.mean_scores.rmse += e.scores.rmse;
      s.mean_scores.n_points += e.scores.n_points;
    }
    if (s.n_ok > 0) {
      const double n = s.n_ok;
      for (auto& m : s.mse) m /= n;
      s.mean_scores.brier /= n;
      s.mean_scores.spherical /= n;
      s.mean_scores.rps /= n;
      s.mean_scores.rmse /= n;
    }
    out.push_back(s);
  };
  if (options.include_proposed) summarize(StudyModel::Proposed);
  if (options.include_glm) summarize(StudyModel::Glm);
  return out;
}

StudyTable run_study(const DgpSpec& spec, const StudyOptions& options) {
  spec.validate();
  options.config.validate();
  if (options.n_reps < 2) fail(ErrorCode::InvalidParameter, "need at least 2 replications");
  const int holdout = static_cast<int>(std::lround(options.holdout_fraction * spec.T));
  if (holdout < 1 || holdout >= spec.T) fail(ErrorCode::InvalidParameter, "bad holdout fraction");

  StudyTable table;
  table.spec = spec;
  table.records.resize(static_cast<std::size_t>(options.n_reps));
  const std::uint64_t root = options.config.seed;

  parallel_for(table.records.size(), options.config.threads, [&](std::size_t r) {
    auto& rec = table.records[r];
    rec.replication = static_cast<int>(r);
    RngStream rng(root, stream_id({static_cast<std::uint64_t>(StreamPurpose::Simulation), r}));
    const auto sim = generate(rng, spec);
    const auto n_train = static_cast<std::size_t>(spec.T - holdout);
    const auto train = sim.series.slice(0, n_train);
    const auto test = sim.series.slice(n_train, sim.series.length());
    if (options.include_proposed) {
      rec.proposed = fit_proposed(train, test, options, stream_id({root, r}));
    }
    if (options.include_glm) rec.glm = fit_baseline(train, test, options.config.interval_level);
  });

  table.summaries = summarize_study(table.records, spec, options);
  return table;
}

}  // namespace lgpc
