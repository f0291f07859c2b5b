#include "lgpc/arms.hpp"

#include <algorithm>
#include <limits>

namespace lgpc {
namespace detail {

namespace {

struct Line {
  double slope, intercept;
  bool present;
  double at(double x) const { return intercept + slope * x; }
};

Line secant(const double* xs, const double* hs, std::size_t n, std::ptrdiff_t i,
            std::ptrdiff_t j) {
  if (i < 0 || j >= static_cast<std::ptrdiff_t>(n)) return {0.0, 0.0, false};
  const double m = (hs[j] - hs[i]) / (xs[j] - xs[i]);
  return {m, hs[i] - m * xs[i], true};
}

// Abscissa where two lines cross, or NaN if parallel.
double crossing(const Line& a, const Line& b) {
  const double ds = a.slope - b.slope;
  if (ds == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (b.intercept - a.intercept) / ds;
}

// Integral of exp(y) over a linear piece, relative to the global shift.
double piece_area(double x0, double x1, double y0, double y1) {
  const double width = x1 - x0;
  const double dy = y1 - y0;
  if (std::abs(dy) < 1e-10) return width * std::exp(0.5 * (y0 + y1));
  return width * (std::exp(y1) - std::exp(y0)) / dy;
}

}  // namespace

void ArmsEnvelope::insert(double x, double h) {
  if (n_points_ >= kArmsMaxPoints) return;
  std::size_t pos = n_points_;
  while (pos > 0 && xs_[pos - 1] > x) {
    xs_[pos] = xs_[pos - 1];
    hs_[pos] = hs_[pos - 1];
    --pos;
  }
  if (pos > 0 && xs_[pos - 1] == x) {
    // Duplicate abscissa: undo the shift.
    for (std::size_t i = pos; i < n_points_; ++i) {
      xs_[i] = xs_[i + 1];
      hs_[i] = hs_[i + 1];
    }
    return;
  }
  xs_[pos] = x;
  hs_[pos] = h;
  ++n_points_;
}

// Interval numbering: 0 is [lower, x_0], i+1 is [x_i, x_i+1], k is [x_k-1, upper].
// secants[j] is the line through points j and j+1.
namespace {

double envelope_value(const Line* secants, std::size_t k, std::size_t interval, double x) {
  if (interval == 0) return secants[0].at(x);
  if (interval >= k) return secants[k - 2].at(x);
  const std::size_t i = interval - 1;
  double outer = std::numeric_limits<double>::infinity();
  if (i >= 1) outer = secants[i - 1].at(x);
  if (i + 2 < k) outer = std::min(outer, secants[i + 1].at(x));
  return std::max(secants[i].at(x), outer);
}

}  // namespace

void ArmsEnvelope::rebuild() {
  n_pieces_ = 0;
  const std::size_t k = n_points_;
  const double* xs = xs_.data();
  const double* hs = hs_.data();
  std::array<Line, kArmsMaxPoints> secants;
  for (std::size_t j = 0; j + 1 < k; ++j) {
    secants[j] = secant(xs, hs, k, static_cast<std::ptrdiff_t>(j), static_cast<std::ptrdiff_t>(j + 1));
  }

  for (std::size_t interval = 0; interval <= k; ++interval) {
    const double a = interval == 0 ? lower_ : xs[interval - 1];
    const double b = interval == k ? upper_ : xs[interval];
    if (!(b > a)) continue;
    std::array<double, 5> cuts{a, b};
    std::size_t n_cuts = 2;
    if (interval >= 1 && interval < k) {
      const std::size_t i = interval - 1;
      const Line none{0.0, 0.0, false};
      const Line lines[3] = {secants[i], i >= 1 ? secants[i - 1] : none,
                             i + 2 < k ? secants[i + 1] : none};
      for (int p = 0; p < 3; ++p) {
        for (int q = p + 1; q < 3; ++q) {
          if (!lines[p].present || !lines[q].present) continue;
          const double c = crossing(lines[p], lines[q]);
          if (c > a && c < b) cuts[n_cuts++] = c;
        }
      }
      std::sort(cuts.begin(), cuts.begin() + static_cast<std::ptrdiff_t>(n_cuts));
    }
    for (std::size_t c = 0; c + 1 < n_cuts; ++c) {
      const double x0 = cuts[c], x1 = cuts[c + 1];
      if (!(x1 > x0)) continue;
      pieces_[n_pieces_++] = {x0, x1, envelope_value(secants.data(), k, interval, x0),
                              envelope_value(secants.data(), k, interval, x1)};
    }
  }

  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n_pieces_; ++j) {
    shift = std::max({shift, pieces_[j].y0, pieces_[j].y1});
  }
  if (!std::isfinite(shift)) fail(ErrorCode::EnvelopeFailure, "ARMS envelope is not finite");

  double total = 0.0;
  for (std::size_t j = 0; j < n_pieces_; ++j) {
    const auto& p = pieces_[j];
    total += piece_area(p.x0, p.x1, p.y0 - shift, p.y1 - shift);
    cumulative_[j] = total;
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    fail(ErrorCode::EnvelopeFailure, "ARMS envelope has no mass");
  }
}

double ArmsEnvelope::sample(RngStream& rng, double& envelope_value) const {
  const auto cum_end = cumulative_.begin() + static_cast<std::ptrdiff_t>(n_pieces_);
  const double target = rng.uniform() * cumulative_[n_pieces_ - 1];
  auto it = std::lower_bound(cumulative_.begin(), cum_end, target);
  if (it == cum_end) --it;
  const auto& p = pieces_[static_cast<std::size_t>(it - cumulative_.begin())];

  const double width = p.x1 - p.x0;
  const double slope = (p.y1 - p.y0) / width;
  const double u = rng.uniform();
  double x;
  if (std::abs(slope * width) < 1e-10) {
    x = p.x0 + u * width;
  } else if (slope > 0.0) {
    x = p.x1 + std::log(u + (1.0 - u) * std::exp(-slope * width)) / slope;
  } else {
    x = p.x0 + std::log1p(u * std::expm1(slope * width)) / slope;
  }
  x = std::clamp(x, p.x0, p.x1);
  envelope_value = p.y0 + slope * (x - p.x0);
  return x;
}

double ArmsEnvelope::evaluate(double x) const {
  const auto end = pieces_.begin() + static_cast<std::ptrdiff_t>(n_pieces_);
  auto it = std::upper_bound(pieces_.begin(), end, x,
                             [](double v, const Piece& p) { return v < p.x0; });
  if (it != pieces_.begin()) --it;
  const auto& p = *it;
  const double t = (x - p.x0) / (p.x1 - p.x0);
  return p.y0 + t * (p.y1 - p.y0);
}

}  // namespace detail

double sample_arms(RngStream& rng, const ArmsTarget& target, double current) {
  if (!target.log_density) fail(ErrorCode::InvalidParameter, "ARMS target has no evaluator");
  return sample_arms(rng, target.log_density, target.lower, target.upper,
                     std::span<const double>(target.abscissae), current);
}

}  // namespace lgpc
