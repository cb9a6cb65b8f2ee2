#pragma once

#include <span>

namespace tailcausal {

/// Logistic (Gumbel) extreme-value copula C(u, v) = exp(-((-ln u)^θ + (-ln v)^θ)^(1/θ)), θ >= 1.
double gumbel_cdf(double u, double v, double theta);
double gumbel_log_density(double u, double v, double theta);
/// P(V <= v | U = u).
double gumbel_conditional_cdf(double v, double u, double theta);
/// Inverse of the conditional cdf in v, by bisection to 1e-8.
double gumbel_conditional_quantile(double tau, double u, double theta);

struct GumbelFit {
  double theta = 1.0;
  double se_theta = 0.0;   ///< from the numeric second derivative; NaN when saturated
  bool saturated = false;  ///< optimum hit the upper bound theta_max
};

inline constexpr double kGumbelThetaMax = 50.0;

/// Maximum-likelihood θ on [1, kGumbelThetaMax] for pseudo-observations in (0, 1)^2.
GumbelFit fit_gumbel(std::span<const double> u, std::span<const double> v);

}  // namespace tailcausal
