#include "tailcausal/copula.hpp"

#include "tailcausal/error.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace tailcausal {
namespace {

void check_theta(double theta) {
  if (!(theta >= 1.0) || !std::isfinite(theta)) throw ArgumentError("Gumbel parameter must be >= 1");
}

// log(x^theta + y^theta) without underflow for tiny x, y
double log_a(double x, double y, double theta) {
  const double lx = std::log(x);
  const double ly = std::log(y);
  return theta * std::max(lx, ly) + std::log1p(std::exp(-theta * std::abs(lx - ly)));
}

double log_likelihood(std::span<const double> u, std::span<const double> v, double theta) {
  double ll = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) ll += gumbel_log_density(u[i], v[i], theta);
  return ll;
}

}  // namespace

double gumbel_cdf(double u, double v, double theta) {
  check_theta(theta);
  return std::exp(-std::exp(log_a(-std::log(u), -std::log(v), theta) / theta));
}

double gumbel_log_density(double u, double v, double theta) {
  const double x = -std::log(u);
  const double y = -std::log(v);
  const double la = log_a(x, y, theta);
  const double ainv = std::exp(la / theta);
  return -ainv + (theta - 1.0) * (std::log(x) + std::log(y)) - std::log(u) - std::log(v) + (2.0 / theta - 2.0) * la +
         std::log1p((theta - 1.0) / ainv);
}

double gumbel_conditional_cdf(double v, double u, double theta) {
  if (v <= 0.0) return 0.0;
  if (v >= 1.0) return 1.0;
  const double x = -std::log(u);
  const double y = -std::log(v);
  const double la = log_a(x, y, theta);
  const double lc = -std::exp(la / theta) + (1.0 / theta - 1.0) * la + (theta - 1.0) * std::log(x) + x;
  return std::exp(lc);
}

double gumbel_conditional_quantile(double tau, double u, double theta) {
  if (!(tau > 0.0 && tau < 1.0)) throw ArgumentError("quantile level must lie in (0, 1)");
  check_theta(theta);
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-8) {
    const double mid = 0.5 * (lo + hi);
    if (gumbel_conditional_cdf(mid, u, theta) < tau) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

GumbelFit fit_gumbel(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw ArgumentError("pseudo-observation vectors differ in length");
  if (u.size() < 2) throw SampleSizeError("copula fit needs at least two points");
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(u[i] > 0.0 && u[i] < 1.0 && v[i] > 0.0 && v[i] < 1.0)) {
      throw DomainError("pseudo-observations must lie in (0, 1)");
    }
  }
  auto nll = [&](double t) { return -log_likelihood(u, v, t); };
  std::uintmax_t iters = 200;
  const auto [theta, value] = boost::math::tools::brent_find_minima(nll, 1.0, kGumbelThetaMax, 40, iters);
  if (!std::isfinite(value)) throw FitError("copula likelihood is not finite at the optimum");

  GumbelFit fit;
  fit.theta = theta;
  fit.saturated = theta > kGumbelThetaMax - 1e-3;
  if (fit.saturated) {
    fit.se_theta = std::numeric_limits<double>::quiet_NaN();
  } else {
    const double h = 1e-4 * theta;
    const double lo = std::max(1.0, theta - h);
    const double hi = lo + 2.0 * h;
    const double mid = lo + h;
    const double curv = (nll(hi) - 2.0 * nll(mid) + nll(lo)) / (h * h);
    fit.se_theta = curv > 0.0 ? 1.0 / std::sqrt(curv) : std::numeric_limits<double>::quiet_NaN();
  }
  return fit;
}

}  // namespace tailcausal
