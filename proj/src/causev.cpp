#include "tailcausal/causev.hpp"

#include "tailcausal/error.hpp"
#include "tailcausal/random.hpp"

#include <algorithm>
#include <cmath>

namespace tailcausal {
namespace {

constexpr double kClip = 1e-12;

double clip_prob(double p) { return std::clamp(p, kClip, 1.0 - kClip); }

double mean_pinball(std::span<const double> obs, double q, double tau) {
  double s = 0.0;
  for (double o : obs) s += pinball_loss(o - q, tau);
  return s / static_cast<double>(obs.size());
}

// mean over points of the pinball loss of target_i against C^{-1}(tau | given_i)
double conditional_score(std::span<const double> target, std::span<const double> given, double theta, double tau) {
  double s = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    s += pinball_loss(target[i] - gumbel_conditional_quantile(tau, given[i], theta), tau);
  }
  return s / static_cast<double>(target.size());
}

}  // namespace

ExtremePairModel fit_pair_model(std::span<const double> x, std::span<const double> y, double u) {
  if (!(u > 0.0 && u < 1.0)) throw ArgumentError("quadrant level u must lie in (0, 1)");
  const PairedSample p = paired_complete(x, y);
  if (p.x.empty()) throw SampleSizeError("no joint observations");
  const double qx = empirical_quantile(p.x, u);
  const double qy = empirical_quantile(p.y, u);
  std::vector<double> ex;
  std::vector<double> ey;
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    if (p.x[i] > qx && p.y[i] > qy) {
      ex.push_back(p.x[i] - qx);
      ey.push_back(p.y[i] - qy);
    }
  }
  if (ex.size() < kMinQuadrant) {
    throw SampleSizeError("upper quadrant holds " + std::to_string(ex.size()) + " points, need " +
                          std::to_string(kMinQuadrant));
  }
  ExtremePairModel m;
  m.threshold_u = u;
  m.n_quadrant = ex.size();
  m.margin_x = fit_gpd(ex);
  m.margin_y = fit_gpd(ey);
  m.margin_x.threshold = qx;
  m.margin_y.threshold = qy;
  m.u.resize(ex.size());
  m.v.resize(ey.size());
  for (std::size_t i = 0; i < ex.size(); ++i) {
    m.u[i] = clip_prob(gpd_cdf(ex[i], m.margin_x.xi, m.margin_x.sigma));
    m.v[i] = clip_prob(gpd_cdf(ey[i], m.margin_y.xi, m.margin_y.sigma));
  }
  m.copula = fit_gumbel(m.u, m.v);
  return m;
}

std::vector<double> default_tau_grid() { return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}; }

CausevScore causev_score(std::span<const double> x, std::span<const double> y, double u,
                         std::span<const double> tau_grid) {
  std::vector<double> grid(tau_grid.begin(), tau_grid.end());
  if (grid.empty()) grid = default_tau_grid();
  for (double t : grid) {
    if (!(t > 0.0 && t < 1.0)) throw ArgumentError("tau grid levels must lie in (0, 1)");
  }
  std::sort(grid.begin(), grid.end());

  const ExtremePairModel m = fit_pair_model(x, y, u);
  const double theta = m.copula.theta;
  CausevScore s;
  for (double t : grid) {
    s.score_x += mean_pinball(m.u, t, t);
    s.score_y += mean_pinball(m.v, t, t);
    s.score_y_given_x += conditional_score(m.v, m.u, theta, t);
    s.score_x_given_y += conditional_score(m.u, m.v, theta, t);
  }
  const double k = static_cast<double>(grid.size());
  s.score_x /= k;
  s.score_y /= k;
  s.score_y_given_x /= k;
  s.score_x_given_y /= k;
  const double total = s.score_x + s.score_y_given_x + s.score_y + s.score_x_given_y;
  if (!(total > 0.0)) throw NumericError("quantile scores vanish; the quadrant is degenerate");
  s.s_xy = (s.score_y + s.score_x_given_y) / total;
  s.s_yx = (s.score_x + s.score_y_given_x) / total;
  s.theta = theta;
  s.saturated = m.copula.saturated;
  s.n_quadrant = m.n_quadrant;
  return s;
}

const char* to_string(Direction d) noexcept {
  switch (d) {
    case Direction::x_to_y: return "x->y";
    case Direction::y_to_x: return "y->x";
    case Direction::none: break;
  }
  return "none";
}

Direction decide_direction(const Interval& ci) noexcept {
  if (ci.lower > 0.5) return Direction::x_to_y;
  if (ci.upper < 0.5) return Direction::y_to_x;
  return Direction::none;
}

CausevDecision causev_direction(const SeriesTable& table, std::size_t ix, std::size_t iy, const CausevOptions& opt,
                                std::uint64_t seed) {
  if (ix >= table.cols() || iy >= table.cols() || ix == iy) throw ArgumentError("invalid column pair");
  if (opt.n_boot < 2) throw ArgumentError("n_boot must be at least 2");
  CausevDecision out;
  out.estimate = causev_score(table.column(ix), table.column(iy), opt.u, opt.tau_grid);
  out.n_boot = opt.n_boot;
  out.by_year = table.has_dates();

  std::vector<double> scores;
  scores.reserve(opt.n_boot);
  for (std::size_t r = 0; r < opt.n_boot; ++r) {
    const Resample rs = bootstrap_resample(table, derive_seed(seed, r));
    try {
      scores.push_back(causev_score(rs.table.column(ix), rs.table.column(iy), opt.u, opt.tau_grid).s_xy);
    } catch (const Error&) {
      ++out.n_failed;
    }
  }
  if (out.n_failed * 10 > opt.n_boot) {
    throw FitError(std::to_string(out.n_failed) + " of " + std::to_string(opt.n_boot) +
                   " bootstrap replicates failed");
  }
  out.ci = percentile_interval(scores);
  out.direction = decide_direction(out.ci);
  return out;
}

}  // namespace tailcausal
