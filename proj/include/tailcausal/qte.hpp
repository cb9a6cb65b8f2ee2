#pragma once

#include "tailcausal/coef_matrix.hpp"
#include "tailcausal/tail_stats.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace tailcausal {

/// Outcomes y > 0, treatment indicators d in {0, 1}, covariates x (n x r, r may be 0).
class TreatmentSample {
 public:
  TreatmentSample(std::vector<double> y, std::vector<int> d, Matrix x);

  std::size_t size() const noexcept { return y_.size(); }
  const std::vector<double>& y() const noexcept { return y_; }
  const std::vector<int>& d() const noexcept { return d_; }
  const Matrix& x() const noexcept { return x_; }
  std::size_t arm_size(int arm) const;

  TreatmentSample select_rows(std::span<const std::size_t> rows) const;

 private:
  std::vector<double> y_;
  std::vector<int> d_;
  Matrix x_;
};

/// Logistic propensity on a polynomial basis of standardized covariates.
class Propensity {
 public:
  /// Π ≡ p. With clip = false the value is used as is (p = 1 gives unit treated weights).
  static Propensity constant(double p, bool clip = true);

  double operator()(const Eigen::Ref<const Vector>& covariates) const;
  /// Π̂ at every row of `x`, clipped to [lower, upper] unless clipping is off.
  std::vector<double> evaluate(const Matrix& x) const;

  std::size_t degree() const noexcept { return degree_; }
  const Vector& coefficients() const noexcept { return beta_; }
  bool clipped() const noexcept { return clip_; }

  static constexpr double lower = 0.01;
  static constexpr double upper = 0.99;

 private:
  friend Propensity estimate_propensity(const TreatmentSample&, std::size_t);

  double raw(const Eigen::Ref<const Vector>& covariates) const;

  std::size_t degree_ = 0;
  Vector mean_;
  Vector scale_;
  std::vector<std::vector<std::size_t>> monomials_;  // covariate index multiset per basis term
  Vector beta_;
  std::optional<double> constant_;
  bool clip_ = true;
};

/// IRLS fit of D on all monomials of total degree <= basis_degree. Both arms need 30 units.
Propensity estimate_propensity(const TreatmentSample& sample, std::size_t basis_degree = 2);

/// Inverse-propensity weights of `arm`: D/Π for arm 1, (1 - D)/(1 - Π) for arm 0.
std::vector<double> arm_weights(const TreatmentSample& sample, const Propensity& prop, int arm);

/// Weighted order statistic minimizing the weighted pinball loss.
double adjusted_quantile(const TreatmentSample& sample, const Propensity& prop, double tau, int arm);

/// (1 / (n tau_n)) sum_j [log Y_j - log q̂(1 - tau_n)] w_j 1{Y_j > q̂(1 - tau_n)}.
double causal_hill(const TreatmentSample& sample, const Propensity& prop, double tau_n, int arm);

struct QteEstimate {
  double qte = 0.0;
  double q1_int = 0.0;
  double q0_int = 0.0;
  double xi1 = 0.0;
  double xi0 = 0.0;
  double tau_n = 0.05;
  double p_n = 0.005;
  std::optional<Interval> ci;
  std::size_t n_boot = 0;
  std::size_t n_failed = 0;
};

/// q̂1(1 - τ)(τ/p)^ξ̂1 - q̂0(1 - τ)(τ/p)^ξ̂0.
QteEstimate extremal_qte(const TreatmentSample& sample, const Propensity& prop, double tau_n = 0.05,
                         double p_n = 0.005);

struct PropensitySpec {
  std::size_t degree = 2;
  std::optional<double> constant;  ///< fixed clipped propensity instead of a fit

  Propensity fit(const TreatmentSample& sample) const;
};

/// Percentile interval over i.i.d. row resamples; the propensity is refitted per replicate.
QteEstimate qte_bootstrap(const TreatmentSample& sample, const PropensitySpec& spec, double tau_n, double p_n,
                          std::size_t n_boot, std::uint64_t seed);

}  // namespace tailcausal
