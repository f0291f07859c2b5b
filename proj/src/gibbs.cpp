#include "lgpc/gibbs.hpp"

#include "lgpc/arms.hpp"
#include "lgpc/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace lgpc {

ConditionalContext::ConditionalContext(const ObservedSeries& s, const CorrelationFactor& f,
                                       const ModelConfig& c)
    : series(s), factor(f), config(c) {
  if (static_cast<Eigen::Index>(s.length()) != f.size()) {
    fail(ErrorCode::DimensionMismatch, "correlation factor does not match series length");
  }
  y = s.counts_as_vector();
  xtx = s.design.transpose() * s.design;
  Eigen::LLT<Eigen::MatrixXd> llt(xtx);
  if (llt.info() != Eigen::Success) fail(ErrorCode::RankDeficient, "X'X is not invertible");
  xtx_inv = llt.solve(Eigen::MatrixXd::Identity(xtx.rows(), xtx.cols()));
  xtx_inv = 0.5 * (xtx_inv + xtx_inv.transpose());
  Eigen::LLT<Eigen::MatrixXd> inv_llt(xtx_inv);
  if (inv_llt.info() != Eigen::Success) fail(ErrorCode::RankDeficient, "(X'X)^-1 not positive definite");
  xtx_inv_chol = inv_llt.matrixL();
}

InverseGammaParams sigma2_conditional(const ConditionalContext& ctx, const ChainState& state) {
  const double T = static_cast<double>(ctx.y.size());
  const double rss = (state.mu - ctx.series.design * state.beta - state.w).squaredNorm();
  return {ctx.config.prior_shape + 0.5 * T, ctx.config.prior_scale + 0.5 * rss};
}

InverseGammaParams sigmaw2_conditional(const ConditionalContext& ctx, const ChainState& state) {
  const double T = static_cast<double>(ctx.y.size());
  const double q = quadratic_form(ctx.factor, state.w);
  return {ctx.config.prior_shape + 0.5 * T, ctx.config.prior_scale + 0.5 * q};
}

GaussianMoments beta_conditional(const ConditionalContext& ctx, const ChainState& state) {
  const Eigen::VectorXd rhs = ctx.series.design.transpose() * (state.mu - state.w);
  return {ctx.xtx_inv * rhs, state.sigma2 * ctx.xtx_inv};
}

namespace {

// Posterior variances of w in the eigenbasis: 1 / (1/sigma2 + 1/(sigmaw2 lambda_i)).
Eigen::VectorXd w_eigen_variances(const CorrelationFactor& f, double sigma2, double sigmaw2) {
  return (1.0 / sigma2 + (1.0 / sigmaw2) * f.eigenvalues().array().inverse()).inverse().matrix();
}

}  // namespace

GaussianMoments w_conditional(const ConditionalContext& ctx, const ChainState& state) {
  const auto& Q = ctx.factor.eigenvectors();
  const Eigen::VectorXd d = w_eigen_variances(ctx.factor, state.sigma2, state.sigmaw2);
  const Eigen::VectorXd r = state.mu - ctx.series.design * state.beta;
  GaussianMoments m;
  m.covariance = Q * d.asDiagonal() * Q.transpose();
  m.mean = Q * (d.array() * (Q.transpose() * r).array() / state.sigma2).matrix();
  return m;
}

double update_sigma2(RngStream& rng, const ConditionalContext& ctx, const ChainState& state) {
  const auto p = sigma2_conditional(ctx, state);
  return sample_inverse_gamma(rng, p.shape, p.scale);
}

double update_sigmaw2(RngStream& rng, const ConditionalContext& ctx, const ChainState& state) {
  const auto p = sigmaw2_conditional(ctx, state);
  return sample_inverse_gamma(rng, p.shape, p.scale);
}

Eigen::VectorXd update_beta(RngStream& rng, const ConditionalContext& ctx, const ChainState& state) {
  const Eigen::VectorXd mean =
      ctx.xtx_inv * (ctx.series.design.transpose() * (state.mu - state.w));
  return sample_mvn(rng, mean, std::sqrt(state.sigma2) * ctx.xtx_inv_chol);
}

Eigen::VectorXd update_w(RngStream& rng, const ConditionalContext& ctx, const ChainState& state) {
  const auto& Q = ctx.factor.eigenvectors();
  const Eigen::VectorXd d = w_eigen_variances(ctx.factor, state.sigma2, state.sigmaw2);
  const Eigen::VectorXd r = state.mu - ctx.series.design * state.beta;
  Eigen::VectorXd coef = (Q.transpose() * r).cwiseProduct(d) / state.sigma2;
  for (Eigen::Index i = 0; i < coef.size(); ++i) coef[i] += std::sqrt(d[i]) * rng.normal();
  return Q * coef;
}

double mu_log_density(double mu, double c, double y, double sigma2) {
  const double dev = mu - c;
  return -0.5 * dev * dev / sigma2 + y * mu - std::exp(mu);
}

double mu_conditional_mode(double c, double y, double sigma2) {
  // Gradient g(mu) = -(mu - c)/sigma2 + y - exp(mu) is decreasing and concave,
  // so Newton from a point with g < 0 approaches the root monotonically.
  const double anchor = std::log(y + 1.0) + 1.0;
  double mu = std::min(c + sigma2 * y, std::max(c, anchor));
  for (int it = 0; it < 200; ++it) {
    const double e = std::exp(mu);
    const double g = -(mu - c) / sigma2 + y - e;
    const double h = -1.0 / sigma2 - e;
    const double step = g / h;
    mu -= step;
    if (std::abs(step) <= 1e-12 * (1.0 + std::abs(mu))) break;
  }
  return mu;
}

double sample_mu_component(RngStream& rng, double c, double y, double sigma2, double current) {
  const double mode = mu_conditional_mode(c, y, sigma2);
  const double sd = 1.0 / std::sqrt(1.0 / sigma2 + std::exp(mode));
  const std::array<double, 5> abscissae{mode - 2.5 * sd, mode - 1.0 * sd, mode,
                                        mode + 1.0 * sd, mode + 2.5 * sd};
  double lower = mode - 30.0 * sd;
  double upper = mode + 30.0 * sd;
  if (std::isfinite(current)) {
    lower = std::min(lower, current - sd);
    upper = std::max(upper, current + sd);
  } else {
    current = mode;
  }
  return sample_arms(
      rng, [&](double mu) { return mu_log_density(mu, c, y, sigma2); }, lower, upper,
      std::span<const double>(abscissae), current);
}

Eigen::VectorXd update_mu(RngStream& rng, const ConditionalContext& ctx, const ChainState& state) {
  const Eigen::VectorXd c = ctx.series.design * state.beta + state.w;
  Eigen::VectorXd mu(c.size());
  for (Eigen::Index t = 0; t < c.size(); ++t) {
    mu[t] = sample_mu_component(rng, c[t], ctx.y[t], state.sigma2, state.mu[t]);
  }
  return mu;
}

void gibbs_sweep(RngStream& rng, const ConditionalContext& ctx, ChainState& state) {
  // Both variances are drawn from the same (beta, mu, w).
  const double sigma2 = update_sigma2(rng, ctx, state);
  const double sigmaw2 = update_sigmaw2(rng, ctx, state);
  state.sigma2 = sigma2;
  state.sigmaw2 = sigmaw2;
  state.beta = update_beta(rng, ctx, state);
  state.w = update_w(rng, ctx, state);
  state.mu = update_mu(rng, ctx, state);
}

double gelman_rubin(const std::vector<std::vector<double>>& chains) {
  if (chains.size() < 2) fail(ErrorCode::InsufficientData, "Gelman-Rubin needs at least 2 chains");
  const std::size_t L = chains.front().size();
  for (const auto& c : chains) {
    if (c.size() != L) fail(ErrorCode::InsufficientData, "chains differ in length");
  }
  if (L < 10) fail(ErrorCode::InsufficientData, "Gelman-Rubin needs at least 10 values per chain");

  const double n = static_cast<double>(L);
  const double m = static_cast<double>(chains.size());
  std::vector<double> means, vars;
  for (const auto& c : chains) {
    double mean = 0.0;
    for (double v : c) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : c) ss += (v - mean) * (v - mean);
    means.push_back(mean);
    vars.push_back(ss / (n - 1.0));
  }
  double grand = 0.0;
  for (double v : means) grand += v;
  grand /= m;
  double b_over_n = 0.0;
  for (double v : means) b_over_n += (v - grand) * (v - grand);
  b_over_n /= (m - 1.0);
  double W = 0.0;
  for (double v : vars) W += v;
  W /= m;

  if (W <= 0.0) return b_over_n > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  const double rhat = std::sqrt(((n - 1.0) / n * W + b_over_n) / W);
  return std::max(1.0, rhat);
}

std::vector<double> monitored_scalars(const ChainState& state) {
  std::vector<double> s(state.beta.data(), state.beta.data() + state.beta.size());
  s.push_back(std::log(state.sigma2));
  s.push_back(std::log(state.sigmaw2));
  return s;
}

GelmanRubinReport gelman_rubin_report(const std::vector<std::vector<std::vector<double>>>& traces,
                                      int sweeps) {
  GelmanRubinReport report;
  report.sweeps = sweeps;
  if (traces.empty() || traces.front().empty()) {
    fail(ErrorCode::InsufficientData, "no traces to monitor");
  }
  const std::size_t k = traces.front().front().size();
  std::vector<std::vector<double>> per_chain(traces.size());
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t c = 0; c < traces.size(); ++c) {
      per_chain[c].clear();
      for (const auto& row : traces[c]) per_chain[c].push_back(row[j]);
    }
    const double r = gelman_rubin(per_chain);
    report.factors.push_back(r);
    report.max_statistic = std::max(report.max_statistic, r);
  }
  return report;
}

ChainState initial_state(RngStream& rng, const ConditionalContext& ctx) {
  const auto& X = ctx.series.design;
  const Eigen::VectorXd logy = (ctx.y.array() + 1.0).log().matrix();
  ChainState s;
  s.beta = ctx.xtx_inv * (X.transpose() * logy);
  for (Eigen::Index j = 0; j < s.beta.size(); ++j) s.beta[j] += 0.5 * rng.normal();
  s.sigma2 = sample_inverse_gamma(rng, ctx.config.prior_shape, ctx.config.prior_scale);
  s.sigmaw2 = sample_inverse_gamma(rng, ctx.config.prior_shape, ctx.config.prior_scale);
  s.w = Eigen::VectorXd::Zero(ctx.y.size());
  s.mu = X * s.beta;
  return s;
}

PosteriorSamples run_sampler(const ObservedSeries& series, const ModelConfig& config,
                             const CorrelationFactor& factor, std::uint64_t stream_tag) {
  config.validate();
  require_valid(series);
  if (factor.phi() != config.phi) {
    fail(ErrorCode::InvalidParameter, "correlation factor was built with a different phi");
  }
  const ConditionalContext ctx(series, factor, config);
  const auto n_chains = static_cast<std::size_t>(config.n_chains);
  const std::uint64_t seed = config.seed;

  struct Chain {
    RngStream rng;
    ChainState state;
    std::vector<std::vector<double>> trace;
    std::vector<ChainState> stored;
  };
  std::vector<Chain> chains;
  chains.reserve(n_chains);
  for (std::size_t c = 0; c < n_chains; ++c) {
    RngStream init(seed, stream_id({static_cast<std::uint64_t>(StreamPurpose::ChainInit),
                                    stream_tag, c}));
    RngStream sweep(seed, stream_id({static_cast<std::uint64_t>(StreamPurpose::ChainSweep),
                                     stream_tag, c}));
    ChainState start = initial_state(init, ctx);
    chains.push_back({std::move(sweep), std::move(start), {}, {}});
  }

  PosteriorSamples out;
  out.phi_used = factor.phi();

  // Burn-in with R-hat checks on the second half of each chain's history.
  int sweeps = 0;
  bool converged = false;
  while (sweeps < config.max_burn_sweeps) {
    const int block = std::min(config.gr_check_interval, config.max_burn_sweeps - sweeps);
    parallel_for(n_chains, config.threads, [&](std::size_t c) {
      auto& ch = chains[c];
      for (int s = 0; s < block; ++s) {
        gibbs_sweep(ch.rng, ctx, ch.state);
        ch.trace.push_back(monitored_scalars(ch.state));
      }
    });
    sweeps += block;

    const std::size_t half = static_cast<std::size_t>(sweeps) / 2;
    std::vector<std::vector<std::vector<double>>> window(n_chains);
    for (std::size_t c = 0; c < n_chains; ++c) {
      window[c].assign(chains[c].trace.begin() + static_cast<std::ptrdiff_t>(half),
                       chains[c].trace.end());
    }
    const auto report = gelman_rubin_report(window, sweeps);
    out.gr_history.push_back({sweeps, report.max_statistic});
    if (report.max_statistic < config.gr_threshold) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream os;
    os << "Gelman-Rubin statistic " << out.gr_history.back().statistic << " above "
       << config.gr_threshold << " after " << sweeps << " sweeps";
    throw ConvergenceError(os.str(), out.gr_history);
  }
  out.burn_sweeps_used = sweeps;
  for (auto& ch : chains) {
    ch.trace.clear();
    ch.trace.shrink_to_fit();
  }

  // Sampling: every chain stores every m-th state; draws are pooled round-robin.
  const auto S = static_cast<std::size_t>(config.posterior_size);
  const std::size_t per_chain = (S + n_chains - 1) / n_chains;
  parallel_for(n_chains, config.threads, [&](std::size_t c) {
    auto& ch = chains[c];
    ch.stored.reserve(per_chain);
    for (std::size_t j = 0; j < per_chain; ++j) {
      for (int s = 0; s < config.thinning; ++s) gibbs_sweep(ch.rng, ctx, ch.state);
      ch.stored.push_back(ch.state);
    }
  });
  out.draws.reserve(S);
  for (std::size_t j = 0; j < per_chain && out.draws.size() < S; ++j) {
    for (std::size_t c = 0; c < n_chains && out.draws.size() < S; ++c) {
      out.draws.push_back(chains[c].stored[j]);
      out.draw_chain.push_back(static_cast<int>(c));
    }
  }
  return out;
}

}  // namespace lgpc
