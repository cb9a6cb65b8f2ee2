#include "tailcausal/tail_stats.hpp"

#include "detail/nelder_mead.hpp"
#include "tailcausal/error.hpp"
#include "tailcausal/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

namespace tailcausal {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kExponentialShape = 1e-9;

struct PwmEstimate {
  double xi;
  double sigma;
};

// Hosking & Wallis probability-weighted moments, plotting positions (i - 0.35) / n.
PwmEstimate pwm_estimate(std::vector<double> sorted) {
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double a0 = 0.0;
  double a1 = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double p = (static_cast<double>(i + 1) - 0.35) / n;
    a0 += sorted[i];
    a1 += (1.0 - p) * sorted[i];
  }
  a0 /= n;
  a1 /= n;
  const double denom = a0 - 2.0 * a1;
  return {2.0 - a0 / denom, 2.0 * a0 * a1 / denom};
}

bool feasible(std::span<const double> y, double xi, double sigma) {
  if (!(sigma > 0.0) || !(xi > -1.0) || !std::isfinite(xi)) return false;
  if (xi >= 0.0) return true;
  const double ymax = *std::max_element(y.begin(), y.end());
  return 1.0 + xi * ymax / sigma > 0.0;
}

double observed_se_xi(std::span<const double> y, double xi, double sigma) {
  auto nll = [&](double a, double b) { return gpd_neg_log_likelihood(y, a, b); };
  const double hx = 1e-4 * std::max(1.0, std::abs(xi));
  const double hs = 1e-4 * sigma;
  const double f0 = nll(xi, sigma);
  const double fxx = (nll(xi + hx, sigma) - 2.0 * f0 + nll(xi - hx, sigma)) / (hx * hx);
  const double fss = (nll(xi, sigma + hs) - 2.0 * f0 + nll(xi, sigma - hs)) / (hs * hs);
  const double fxs = (nll(xi + hx, sigma + hs) - nll(xi + hx, sigma - hs) - nll(xi - hx, sigma + hs) +
                      nll(xi - hx, sigma - hs)) /
                     (4.0 * hx * hs);
  const double det = fxx * fss - fxs * fxs;
  if (!std::isfinite(det) || det <= 0.0 || fxx <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt(fss / det);
}

}  // namespace

double gpd_cdf(double excess, double xi, double sigma) {
  if (excess <= 0.0) return 0.0;
  const double z = excess / sigma;
  if (std::abs(xi) < kExponentialShape) return -std::expm1(-z);
  const double t = 1.0 + xi * z;
  if (t <= 0.0) return 1.0;
  return 1.0 - std::pow(t, -1.0 / xi);
}

double gpd_quantile(double p, double xi, double sigma) {
  if (!(p >= 0.0 && p < 1.0)) throw ArgumentError("GPD quantile level must lie in [0, 1)");
  if (std::abs(xi) < kExponentialShape) return -sigma * std::log1p(-p);
  return sigma * std::expm1(-xi * std::log1p(-p)) / xi;
}

double gpd_neg_log_likelihood(std::span<const double> excesses, double xi, double sigma) {
  if (!(sigma > 0.0) || !(xi > -1.0)) return kInf;
  const double n = static_cast<double>(excesses.size());
  if (std::abs(xi) < kExponentialShape) {
    double s = 0.0;
    for (double y : excesses) s += y;
    return n * std::log(sigma) + s / sigma;
  }
  double s = 0.0;
  for (double y : excesses) {
    const double t = 1.0 + xi * y / sigma;
    if (t <= 0.0) return kInf;
    s += std::log(t);
  }
  return n * std::log(sigma) + (1.0 + 1.0 / xi) * s;
}

double TailFit::cdf(double x) const { return gpd_cdf(x - threshold, xi, sigma); }

double TailFit::quantile(double p) const { return threshold + gpd_quantile(p, xi, sigma); }

TailFit fit_gpd(std::span<const double> excesses) {
  if (excesses.size() < 10) {
    throw SampleSizeError("GPD fit needs at least 10 excesses, got " + std::to_string(excesses.size()));
  }
  for (double y : excesses) {
    if (!(y > 0.0) || !std::isfinite(y)) throw DomainError("GPD excesses must be finite and positive");
  }
  std::vector<double> y(excesses.begin(), excesses.end());
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());

  const PwmEstimate pwm = pwm_estimate(y);
  std::array<double, 2> start{0.0, std::log(mean)};
  if (feasible(y, pwm.xi, pwm.sigma) && pwm.xi < 1.0) start = {pwm.xi, std::log(pwm.sigma)};

  auto objective = [&](const std::array<double, 2>& p) { return gpd_neg_log_likelihood(y, p[0], std::exp(p[1])); };
  auto res = detail::nelder_mead<2>(objective, start, {0.1, 0.1});
  // one restart from the optimum guards against a collapsed simplex
  if (res.converged) {
    auto again = detail::nelder_mead<2>(objective, res.x, {0.05, 0.05});
    if (again.value <= res.value) res = again;
  }

  TailFit fit;
  fit.n_exceed = y.size();
  if (res.converged && std::isfinite(res.value)) {
    fit.xi = res.x[0];
    fit.sigma = std::exp(res.x[1]);
    fit.method = TailFit::Method::mle;
  } else if (feasible(y, pwm.xi, pwm.sigma)) {
    fit.xi = pwm.xi;
    fit.sigma = pwm.sigma;
    fit.method = TailFit::Method::pwm;
  } else {
    std::ostringstream msg;
    msg << "GPD fit failed: simplex " << (res.converged ? "converged to a non-finite value" : "did not converge")
        << " after " << res.iterations << " iterations (xi=" << res.x[0] << ", log sigma=" << res.x[1]
        << "); PWM fallback infeasible (xi=" << pwm.xi << ", sigma=" << pwm.sigma << ")";
    throw FitError(msg.str());
  }
  fit.se_xi = observed_se_xi(y, fit.xi, fit.sigma);
  return fit;
}

TailFit fit_gpd_above(std::span<const double> sample, double threshold) {
  std::vector<double> excesses;
  for (double v : sample) {
    if (!is_missing(v) && v > threshold) excesses.push_back(v - threshold);
  }
  TailFit fit = fit_gpd(excesses);
  fit.threshold = threshold;
  return fit;
}

double hill_estimate(std::span<const double> sample, std::size_t k) {
  if (k < 5) throw ArgumentError("Hill estimator needs k >= 5");
  if (k >= sample.size()) throw ArgumentError("Hill estimator needs k < sample size");
  std::vector<double> top(sample.begin(), sample.end());
  std::partial_sort(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(k + 1), top.end(), std::greater<>());
  const double base = top[k];
  if (!(base > 0.0)) throw DomainError("Hill estimator needs the top k+1 order statistics to be positive");
  const double log_base = std::log(base);
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += std::log(top[i]) - log_base;
  return sum / static_cast<double>(k);
}

std::size_t default_hill_k(std::size_t n) {
  const auto k = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n), 0.7)));
  return std::min(k, n / 5);
}

double empirical_quantile(std::span<const double> sample, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw ArgumentError("quantile level must lie in (0, 1)");
  if (sample.empty()) throw ArgumentError("quantile of an empty sample");
  std::vector<double> v(sample.begin(), sample.end());
  const double n = static_cast<double>(v.size());
  // 1e-9 absorbs representation error in tau * n (0.7 * 10 = 7.000000000000001)
  auto idx = static_cast<std::size_t>(std::ceil(tau * n - 1e-9));
  idx = std::clamp<std::size_t>(idx, 1, v.size()) - 1;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(idx), v.end());
  return v[idx];
}

double quantile_score(std::span<const double> observations, double predicted_quantile, double tau) {
  if (observations.empty()) throw ArgumentError("quantile score of an empty sample");
  if (!(tau > 0.0 && tau < 1.0)) throw ArgumentError("quantile level must lie in (0, 1)");
  double s = 0.0;
  for (double y : observations) s += pinball_loss(y - predicted_quantile, tau);
  return s / static_cast<double>(observations.size());
}

std::vector<ClusterMax> decluster_runs(std::span<const double> series, double threshold, std::size_t gap) {
  if (gap < 1) throw ArgumentError("declustering gap must be at least 1");
  std::vector<ClusterMax> out;
  std::size_t run_below = 0;
  bool open = false;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double v = series[i];
    if (is_missing(v) || !(v > threshold)) {
      ++run_below;
      continue;
    }
    if (!open || run_below >= gap) {
      out.push_back({i, v});
      open = true;
    } else if (v > out.back().value) {
      out.back() = {i, v};
    }
    run_below = 0;
  }
  return out;
}

std::vector<std::size_t> year_bootstrap_rows(const SeriesTable& table, std::uint64_t seed) {
  if (!table.has_dates()) throw ArgumentError("year bootstrap needs a date index");
  const auto& dates = table.dates();

  std::vector<std::pair<std::size_t, std::size_t>> years;  // [begin, end) row ranges
  for (std::size_t i = 0; i < dates.size(); ++i) {
    if (years.empty() || dates[i].year != dates[years.back().first].year) {
      years.push_back({i, i + 1});
    } else {
      years.back().second = i + 1;
    }
  }
  if (years.size() < 2) throw ArgumentError("year bootstrap needs at least two calendar years");

  Engine g = make_engine(seed);
  std::vector<std::size_t> rows;
  rows.reserve(table.rows());
  for (std::size_t draw = 0; draw < years.size(); ++draw) {
    const auto [begin, end] = years[uniform_index(g, years.size())];
    for (std::size_t r = begin; r < end; ++r) rows.push_back(r);
  }
  return rows;
}

SeriesTable bootstrap_years(const SeriesTable& table, std::uint64_t seed) {
  return table.select_rows(year_bootstrap_rows(table, seed));
}

std::vector<std::size_t> iid_bootstrap_rows(std::size_t n, std::uint64_t seed) {
  Engine g = make_engine(seed);
  std::vector<std::size_t> rows(n);
  for (auto& r : rows) r = uniform_index(g, n);
  return rows;
}

Resample bootstrap_resample(const SeriesTable& table, std::uint64_t seed) {
  if (table.has_dates()) return {bootstrap_years(table, seed), true};
  return {table.select_rows(iid_bootstrap_rows(table.rows(), seed)), false};
}

Interval percentile_interval(std::span<const double> values, double level) {
  if (!(level > 0.0 && level < 1.0)) throw ArgumentError("interval level must lie in (0, 1)");
  const double tail = 0.5 * (1.0 - level);
  return {empirical_quantile(values, tail), empirical_quantile(values, 1.0 - tail)};
}

}  // namespace tailcausal
