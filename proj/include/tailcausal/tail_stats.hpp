#pragma once

#include "tailcausal/series.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tailcausal {

/// Generalized Pareto fit of the excesses over `threshold`.
struct TailFit {
  enum class Method { mle, pwm };

  double xi = 0.0;         ///< shape
  double sigma = 1.0;      ///< scale, data units
  double threshold = 0.0;  ///< data units; 0 for fits of raw excesses
  std::size_t n_exceed = 0;
  double se_xi = 0.0;      ///< observed-information standard error (NaN if singular)
  Method method = Method::mle;

  /// P(X <= x | X > threshold).
  double cdf(double x) const;
  /// Inverse of `cdf`, in data units.
  double quantile(double p) const;
};

double gpd_cdf(double excess, double xi, double sigma);
double gpd_quantile(double p, double xi, double sigma);
/// Negative log-likelihood of excesses; +inf outside the support.
double gpd_neg_log_likelihood(std::span<const double> excesses, double xi, double sigma);

/// Maximum-likelihood GPD fit of positive excesses (at least 10).
TailFit fit_gpd(std::span<const double> excesses);
/// Fits the excesses of the non-missing values above `threshold`.
TailFit fit_gpd_above(std::span<const double> sample, double threshold);

/// Hill estimator from the top k order statistics.
double hill_estimate(std::span<const double> sample, std::size_t k);
/// floor(n^0.7) capped at n/5.
std::size_t default_hill_k(std::size_t n);

/// Order statistic with 1-based index ceil(tau * n).
double empirical_quantile(std::span<const double> sample, double tau);

inline double pinball_loss(double residual, double tau) {
  return residual * (tau - (residual < 0.0 ? 1.0 : 0.0));
}
/// Mean pinball loss of `observations` against the predicted tau-quantile.
double quantile_score(std::span<const double> observations, double predicted_quantile, double tau);

struct ClusterMax {
  std::size_t index;
  double value;
};

/// Runs declustering: a new cluster starts once `gap` consecutive
/// sub-threshold (or missing) observations separate two exceedances.
std::vector<ClusterMax> decluster_runs(std::span<const double> series, double threshold, std::size_t gap = 5);

/// Resamples calendar years with replacement and concatenates them in draw
/// order. The result has no date index since years may repeat.
SeriesTable bootstrap_years(const SeriesTable& table, std::uint64_t seed);
std::vector<std::size_t> year_bootstrap_rows(const SeriesTable& table, std::uint64_t seed);
/// n row indices drawn uniformly with replacement.
std::vector<std::size_t> iid_bootstrap_rows(std::size_t n, std::uint64_t seed);

struct Resample {
  SeriesTable table;
  bool by_year = false;  ///< false when the table had no dates and rows were drawn i.i.d.
};
/// Year bootstrap when the table has dates, i.i.d. row bootstrap otherwise.
Resample bootstrap_resample(const SeriesTable& table, std::uint64_t seed);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double v) const noexcept { return lower <= v && v <= upper; }
};

/// Two-sided percentile interval using the empirical_quantile rule.
Interval percentile_interval(std::span<const double> values, double level = 0.95);

}  // namespace tailcausal
