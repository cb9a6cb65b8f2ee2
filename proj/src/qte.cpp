#include "tailcausal/qte.hpp"

#include "tailcausal/error.hpp"
#include "tailcausal/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tailcausal {
namespace {

Eigen::Index ix(std::size_t v) { return static_cast<Eigen::Index>(v); }

constexpr std::size_t kMinArm = 30;
constexpr std::size_t kMinExceedances = 20;
constexpr double kGradientTolerance = 1e-8;
constexpr int kMaxIrls = 100;

void monomials_rec(std::size_t r, std::size_t degree, std::size_t start, std::vector<std::size_t>& cur,
                   std::vector<std::vector<std::size_t>>& out) {
  out.push_back(cur);
  if (cur.size() == degree) return;
  for (std::size_t k = start; k < r; ++k) {
    cur.push_back(k);
    monomials_rec(r, degree, k, cur, out);
    cur.pop_back();
  }
}

double logistic(double t) { return t >= 0.0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t)); }

void check_arm(int arm) {
  if (arm != 0 && arm != 1) throw ArgumentError("arm must be 0 or 1");
}

}  // namespace

TreatmentSample::TreatmentSample(std::vector<double> y, std::vector<int> d, Matrix x)
    : y_(std::move(y)), d_(std::move(d)), x_(std::move(x)) {
  if (d_.size() != y_.size()) throw ArgumentError("y and d differ in length");
  if (x_.cols() == 0) x_.resize(ix(y_.size()), 0);
  if (static_cast<std::size_t>(x_.rows()) != y_.size()) throw ArgumentError("covariates and y differ in length");
  for (std::size_t i = 0; i < y_.size(); ++i) {
    if (d_[i] != 0 && d_[i] != 1) throw ArgumentError("treatment indicators must be 0 or 1");
    if (!(y_[i] > 0.0)) throw DomainError("outcomes must be positive (row " + std::to_string(i + 1) + ")");
  }
  if (!x_.allFinite()) throw ArgumentError("covariates must be finite");
}

std::size_t TreatmentSample::arm_size(int arm) const {
  check_arm(arm);
  return static_cast<std::size_t>(std::count(d_.begin(), d_.end(), arm));
}

TreatmentSample TreatmentSample::select_rows(std::span<const std::size_t> rows) const {
  std::vector<double> y;
  std::vector<int> d;
  Matrix x(ix(rows.size()), x_.cols());
  y.reserve(rows.size());
  d.reserve(rows.size());
  for (std::size_t t = 0; t < rows.size(); ++t) {
    y.push_back(y_.at(rows[t]));
    d.push_back(d_.at(rows[t]));
    x.row(ix(t)) = x_.row(ix(rows[t]));
  }
  return TreatmentSample(std::move(y), std::move(d), std::move(x));
}

Propensity Propensity::constant(double p, bool clip) {
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("constant propensity must lie in [0, 1]");
  Propensity out;
  out.constant_ = p;
  out.clip_ = clip;
  return out;
}

double Propensity::raw(const Eigen::Ref<const Vector>& covariates) const {
  if (constant_) return *constant_;
  if (covariates.size() != mean_.size()) throw ArgumentError("covariate count does not match the fitted model");
  double eta = 0.0;
  for (std::size_t t = 0; t < monomials_.size(); ++t) {
    double term = 1.0;
    for (std::size_t k : monomials_[t]) term *= (covariates(ix(k)) - mean_(ix(k))) / scale_(ix(k));
    eta += beta_(ix(t)) * term;
  }
  return logistic(eta);
}

double Propensity::operator()(const Eigen::Ref<const Vector>& covariates) const {
  const double p = raw(covariates);
  return clip_ ? std::clamp(p, lower, upper) : p;
}

std::vector<double> Propensity::evaluate(const Matrix& x) const {
  std::vector<double> out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) out[static_cast<std::size_t>(i)] = (*this)(x.row(i).transpose());
  return out;
}

Propensity estimate_propensity(const TreatmentSample& sample, std::size_t basis_degree) {
  if (sample.arm_size(1) < kMinArm || sample.arm_size(0) < kMinArm) {
    throw SampleSizeError("propensity fit needs at least 30 units in each arm");
  }
  const Matrix& x = sample.x();
  const auto n = static_cast<std::size_t>(x.rows());
  const auto r = static_cast<std::size_t>(x.cols());

  Propensity prop;
  prop.degree_ = basis_degree;
  prop.mean_ = r > 0 ? Vector(x.colwise().mean().transpose()) : Vector(0);
  prop.scale_ = Vector::Ones(ix(r));
  for (std::size_t k = 0; k < r; ++k) {
    const double sd = std::sqrt((x.col(ix(k)).array() - prop.mean_(ix(k))).square().sum() / static_cast<double>(n));
    if (sd > 0.0) prop.scale_(ix(k)) = sd;
  }
  std::vector<std::size_t> cur;
  monomials_rec(r, basis_degree, 0, cur, prop.monomials_);

  const auto p = prop.monomials_.size();
  Matrix basis(ix(n), ix(p));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < p; ++t) {
      double term = 1.0;
      for (std::size_t k : prop.monomials_[t]) term *= (x(ix(i), ix(k)) - prop.mean_(ix(k))) / prop.scale_(ix(k));
      basis(ix(i), ix(t)) = term;
    }
  }
  Vector target(ix(n));
  for (std::size_t i = 0; i < n; ++i) target(ix(i)) = sample.d()[i];

  Vector beta = Vector::Zero(ix(p));
  const double frac = target.mean();
  beta(0) = std::log(frac / (1.0 - frac));
  bool converged = false;
  for (int it = 0; it < kMaxIrls; ++it) {
    const Vector eta = basis * beta;
    Vector mu(ix(n));
    Vector w(ix(n));
    for (std::size_t i = 0; i < n; ++i) {
      mu(ix(i)) = logistic(eta(ix(i)));
      w(ix(i)) = mu(ix(i)) * (1.0 - mu(ix(i)));
    }
    const Vector grad = basis.transpose() * (target - mu) / static_cast<double>(n);
    if (grad.norm() < kGradientTolerance) {
      converged = true;
      break;
    }
    const Matrix info = basis.transpose() * w.asDiagonal() * basis / static_cast<double>(n);
    const Eigen::LDLT<Matrix> ldlt(info);
    if (ldlt.info() != Eigen::Success || ldlt.rcond() < 1e-14) {
      throw FitError("propensity information matrix is singular; try a lower basis degree");
    }
    beta += ldlt.solve(grad);
    if (!beta.allFinite() || beta.cwiseAbs().maxCoeff() > 1e3) break;
  }
  if (!converged) {
    throw FitError("propensity IRLS did not converge (possible separation); try a lower basis degree");
  }
  prop.beta_ = beta;
  return prop;
}

std::vector<double> arm_weights(const TreatmentSample& sample, const Propensity& prop, int arm) {
  check_arm(arm);
  const std::vector<double> pi = prop.evaluate(sample.x());
  std::vector<double> w(sample.size(), 0.0);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (sample.d()[i] != arm) continue;
    w[i] = arm == 1 ? 1.0 / pi[i] : 1.0 / (1.0 - pi[i]);
  }
  return w;
}

double adjusted_quantile(const TreatmentSample& sample, const Propensity& prop, double tau, int arm) {
  if (!(tau > 0.0 && tau < 1.0)) throw ArgumentError("quantile level must lie in (0, 1)");
  const std::vector<double> w = arm_weights(sample, prop, arm);
  std::vector<std::size_t> idx;
  double total = 0.0;
  double total_sq = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    idx.push_back(i);
    total += w[i];
    total_sq += w[i] * w[i];
  }
  if (idx.empty()) throw SampleSizeError("arm " + std::to_string(arm) + " is empty");
  if (!std::isfinite(total) || !(total > 0.0)) throw NumericError("degenerate inverse-propensity weights");
  if (total * total / total_sq < static_cast<double>(kMinArm)) {
    throw SampleSizeError("effective sample size of arm " + std::to_string(arm) + " is below 30");
  }
  const auto& y = sample.y();
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return y[a] < y[b]; });
  const double target = tau * total - 1e-9 * total / static_cast<double>(idx.size());
  double cum = 0.0;
  for (std::size_t i : idx) {
    cum += w[i];
    if (cum >= target) return y[i];
  }
  return y[idx.back()];
}

double causal_hill(const TreatmentSample& sample, const Propensity& prop, double tau_n, int arm) {
  if (!(tau_n > 0.0 && tau_n < 1.0)) throw ArgumentError("tau_n must lie in (0, 1)");
  const double q = adjusted_quantile(sample, prop, 1.0 - tau_n, arm);
  if (!(q > 0.0)) throw DomainError("intermediate quantile must be positive");
  const std::vector<double> w = arm_weights(sample, prop, arm);
  const auto& y = sample.y();
  std::vector<std::size_t> exc;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (w[i] != 0.0 && y[i] > q) exc.push_back(i);
  }
  if (exc.size() < kMinExceedances) {
    throw SampleSizeError("arm " + std::to_string(arm) + " has " + std::to_string(exc.size()) +
                          " exceedances of its intermediate quantile, need 20");
  }
  std::stable_sort(exc.begin(), exc.end(), [&](std::size_t a, std::size_t b) { return y[a] > y[b]; });
  const double log_q = std::log(q);
  double sum = 0.0;
  for (std::size_t i : exc) sum += (std::log(y[i]) - log_q) * w[i];
  return sum / (static_cast<double>(sample.size()) * tau_n);
}

QteEstimate extremal_qte(const TreatmentSample& sample, const Propensity& prop, double tau_n, double p_n) {
  if (!(p_n > 0.0 && p_n < tau_n && tau_n < 1.0)) throw ArgumentError("need 0 < p_n < tau_n < 1");
  QteEstimate e;
  e.tau_n = tau_n;
  e.p_n = p_n;
  e.q1_int = adjusted_quantile(sample, prop, 1.0 - tau_n, 1);
  e.q0_int = adjusted_quantile(sample, prop, 1.0 - tau_n, 0);
  e.xi1 = causal_hill(sample, prop, tau_n, 1);
  e.xi0 = causal_hill(sample, prop, tau_n, 0);
  const double ratio = tau_n / p_n;
  e.qte = e.q1_int * std::pow(ratio, e.xi1) - e.q0_int * std::pow(ratio, e.xi0);
  return e;
}

Propensity PropensitySpec::fit(const TreatmentSample& sample) const {
  if (constant) return Propensity::constant(*constant);
  return estimate_propensity(sample, degree);
}

QteEstimate qte_bootstrap(const TreatmentSample& sample, const PropensitySpec& spec, double tau_n, double p_n,
                          std::size_t n_boot, std::uint64_t seed) {
  if (n_boot < 2) throw ArgumentError("n_boot must be at least 2");
  QteEstimate out = extremal_qte(sample, spec.fit(sample), tau_n, p_n);
  std::vector<double> reps;
  reps.reserve(n_boot);
  for (std::size_t r = 0; r < n_boot; ++r) {
    try {
      const TreatmentSample bs = sample.select_rows(iid_bootstrap_rows(sample.size(), derive_seed(seed, r)));
      reps.push_back(extremal_qte(bs, spec.fit(bs), tau_n, p_n).qte);
    } catch (const Error&) {
      ++out.n_failed;
    }
  }
  if (out.n_failed * 10 > n_boot) {
    throw FitError(std::to_string(out.n_failed) + " of " + std::to_string(n_boot) + " bootstrap replicates failed");
  }
  out.n_boot = n_boot;
  out.ci = percentile_interval(reps);
  return out;
}

}  // namespace tailcausal
