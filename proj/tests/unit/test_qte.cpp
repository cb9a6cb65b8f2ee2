#include "tailcausal/error.hpp"
#include "tailcausal/qte.hpp"
#include "tailcausal/random.hpp"
#include "tailcausal/tail_stats.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace tailcausal;

namespace {

double pareto(Engine& g, double alpha) { return std::pow(uniform_open(g), -1.0 / alpha); }

double normal(Engine& g) {
  return std::sqrt(-2.0 * std::log(uniform_open(g))) * std::cos(2.0 * 3.141592653589793 * uniform_open(g));
}

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

// randomized treatment with probability p, one noise covariate, Pareto arms
TreatmentSample pareto_arms(std::size_t n, double alpha1, double alpha0, double p, std::uint64_t seed) {
  Engine g = make_engine(seed);
  std::vector<double> y(n);
  std::vector<int> d(n);
  Matrix x(static_cast<Eigen::Index>(n), 1);
  for (std::size_t i = 0; i < n; ++i) {
    x(static_cast<Eigen::Index>(i), 0) = normal(g);
    d[i] = uniform_open(g) < p ? 1 : 0;
    y[i] = pareto(g, d[i] == 1 ? alpha1 : alpha0);
  }
  return TreatmentSample(std::move(y), std::move(d), std::move(x));
}

std::vector<double> arm_values(const TreatmentSample& s, int arm) {
  std::vector<double> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.d()[i] == arm) out.push_back(s.y()[i]);
  }
  return out;
}

}  // namespace

TEST_CASE("treatment sample validation") {
  CHECK_THROWS_AS(TreatmentSample({1.0, 2.0}, {0, 2}, Matrix(2, 0)), ArgumentError);
  CHECK_THROWS_AS(TreatmentSample({1.0, -2.0}, {0, 1}, Matrix(2, 0)), DomainError);
  CHECK_THROWS_AS(TreatmentSample({1.0, 2.0}, {0}, Matrix(2, 0)), ArgumentError);
  CHECK_THROWS_AS(TreatmentSample({1.0, 2.0}, {0, 1}, Matrix::Zero(3, 1)), ArgumentError);
  const TreatmentSample s({1.0, 2.0, 3.0}, {1, 1, 1}, Matrix(3, 0));
  CHECK(s.arm_size(1) == 3);
  CHECK(s.arm_size(0) == 0);
  const std::vector<std::size_t> rows{2, 2, 0};
  CHECK(s.select_rows(rows).y() == std::vector<double>{3.0, 3.0, 1.0});
}

TEST_CASE("propensity estimation") {
  const TreatmentSample s = pareto_arms(5000, 2.0, 4.0, 0.3, 1);
  const double frac = static_cast<double>(s.arm_size(1)) / 5000.0;
  const std::vector<double> pi = estimate_propensity(s).evaluate(s.x());
  const auto close = std::count_if(pi.begin(), pi.end(), [&](double p) { return std::abs(p - frac) <= 0.03; });
  CHECK(close >= 4750);

  const Propensity flat = estimate_propensity(s, 0);
  CHECK(flat.coefficients().size() == 1);
  const std::vector<double> pf = flat.evaluate(s.x());
  CHECK(pf.front() == doctest::Approx(frac).epsilon(1e-8));
  CHECK(std::all_of(pf.begin(), pf.end(), [&](double p) { return p == pf.front(); }));

  // D = 1{X1 + logistic noise > 0}
  Engine g = make_engine(2);
  std::vector<double> y(3000, 1.0);
  std::vector<int> d(3000);
  Matrix x(3000, 1);
  for (Eigen::Index i = 0; i < 3000; ++i) {
    x(i, 0) = normal(g);
    const double u = uniform_open(g);
    d[static_cast<std::size_t>(i)] = x(i, 0) + std::log(u / (1.0 - u)) > 0.0 ? 1 : 0;
  }
  const Propensity mono = estimate_propensity(TreatmentSample(y, d, x), 1);
  double prev = 0.0;
  for (double v = -3.0; v <= 3.0; v += 0.25) {
    const double p = mono(Vector::Constant(1, v));
    CHECK(p >= prev);
    prev = p;
  }
  CHECK(mono(Vector::Constant(1, 0.0)) == doctest::Approx(0.5).epsilon(0.05));

  // perfect separation
  for (Eigen::Index i = 0; i < 3000; ++i) d[static_cast<std::size_t>(i)] = x(i, 0) > 0.0 ? 1 : 0;
  CHECK_THROWS_AS(estimate_propensity(TreatmentSample(y, d, x), 1), FitError);
  CHECK_THROWS_AS(estimate_propensity(TreatmentSample({1, 2, 3}, {0, 1, 1}, Matrix(3, 0))), SampleSizeError);

  CHECK(Propensity::constant(0.0)(Vector(0)) == Propensity::lower);
  CHECK(Propensity::constant(1.0, false)(Vector(0)) == 1.0);
}

TEST_CASE("adjusted quantiles") {
  const TreatmentSample s = pareto_arms(4000, 2.0, 4.0, 0.5, 3);
  for (double tau : {0.1, 0.5, 0.9, 0.95}) {
    CHECK(adjusted_quantile(s, Propensity::constant(0.5), tau, 1) == empirical_quantile(arm_values(s, 1), tau));
    CHECK(adjusted_quantile(s, Propensity::constant(0.3), tau, 0) == empirical_quantile(arm_values(s, 0), tau));
  }
  const TreatmentSample all(s.y(), std::vector<int>(s.size(), 1), s.x());
  CHECK(adjusted_quantile(all, Propensity::constant(1.0, false), 0.9, 1) == empirical_quantile(s.y(), 0.9));
  CHECK_THROWS_AS(adjusted_quantile(all, Propensity::constant(0.5), 0.9, 0), SampleSizeError);
  CHECK_THROWS_AS(adjusted_quantile(TreatmentSample({1, 2, 3}, {1, 1, 0}, Matrix(3, 0)), Propensity::constant(0.5), 0.5, 1),
                  SampleSizeError);
}

TEST_CASE("adjusted quantile removes confounding") {
  // Π(X) = logistic(1.5 X), Y(1) = exp(X) P with P Pareto(3)
  const double tau = 0.9;
  Engine g = make_engine(4);
  std::vector<double> pop(1000000);
  for (auto& v : pop) v = std::exp(normal(g)) * pareto(g, 3.0);
  const double truth = empirical_quantile(pop, tau);

  const std::size_t n = 5000;
  std::vector<double> y(n);
  std::vector<int> d(n);
  Matrix x(static_cast<Eigen::Index>(n), 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = normal(g);
    x(static_cast<Eigen::Index>(i), 0) = xi;
    d[i] = uniform_open(g) < logistic(1.5 * xi) ? 1 : 0;
    const double y1 = std::exp(xi) * pareto(g, 3.0);
    const double y0 = std::exp(xi) * pareto(g, 3.0) * 0.5;
    y[i] = d[i] == 1 ? y1 : y0;
  }
  const TreatmentSample s(y, d, x);
  const double adj = adjusted_quantile(s, estimate_propensity(s), tau, 1);
  std::vector<double> reps;
  for (std::uint64_t r = 0; r < 100; ++r) {
    const TreatmentSample b = s.select_rows(iid_bootstrap_rows(n, derive_seed(5, r)));
    reps.push_back(adjusted_quantile(b, estimate_propensity(b), tau, 1));
  }
  double mean = 0.0;
  for (double v : reps) mean += v / 100.0;
  double var = 0.0;
  for (double v : reps) var += (v - mean) * (v - mean) / 99.0;
  const double se = std::sqrt(var);
  CHECK(std::abs(adj - truth) <= 3.0 * se);
  CHECK(std::abs(empirical_quantile(arm_values(s, 1), tau) - truth) > 3.0 * se);
}

TEST_CASE("causal Hill") {
  const TreatmentSample s = pareto_arms(20000, 2.0, 4.0, 0.5, 6);
  const TreatmentSample all(s.y(), std::vector<int>(s.size(), 1), s.x());
  const double tau = 0.05;
  const auto k = static_cast<std::size_t>(std::ceil(20000 * tau));
  CHECK(causal_hill(all, Propensity::constant(1.0, false), tau, 1) == hill_estimate(s.y(), k));

  const TreatmentSample none(s.y(), std::vector<int>(s.size(), 0), s.x());
  const double h0 = causal_hill(none, Propensity::constant(0.0), tau, 0);
  CHECK(std::abs(h0 - hill_estimate(s.y(), k)) <= 0.0102 * hill_estimate(s.y(), k));

  CHECK(std::abs(causal_hill(s, estimate_propensity(s), tau, 1) - 0.5) <= 0.1);
  CHECK(std::abs(causal_hill(s, estimate_propensity(s), tau, 0) - 0.25) <= 0.1);

  CHECK_THROWS_AS(causal_hill(pareto_arms(300, 2.0, 2.0, 0.5, 7), Propensity::constant(0.5), 0.05, 1), SampleSizeError);
}

TEST_CASE("extremal QTE") {
  const double tau = 0.05;
  const double p = 0.005;
  const double truth = std::pow(p, -0.5) - std::pow(p, -0.25);
  CHECK(truth == doctest::Approx(10.3815).epsilon(1e-5));
  // extrapolation is exact for Pareto quantiles with the true shape
  for (double xi : {0.25, 0.5}) CHECK(std::pow(tau, -xi) * std::pow(tau / p, xi) == doctest::Approx(std::pow(p, -xi)).epsilon(1e-14));

  const TreatmentSample s = pareto_arms(50000, 2.0, 4.0, 0.5, 8);
  const QteEstimate e = extremal_qte(s, estimate_propensity(s), tau, p);
  CHECK(std::abs(e.qte - truth) <= 0.15 * truth);
  CHECK(e.q1_int > 0.0);
  CHECK(e.tau_n == tau);

  std::vector<double> y3 = s.y();
  for (auto& v : y3) v *= 3.0;
  const TreatmentSample s3(y3, s.d(), s.x());
  const Propensity prop = estimate_propensity(s);
  CHECK(extremal_qte(s3, prop, tau, p).qte == doctest::Approx(3.0 * extremal_qte(s, prop, tau, p).qte).epsilon(1e-12));

  CHECK_THROWS_AS(extremal_qte(s, prop, 0.01, 0.05), ArgumentError);
}

TEST_CASE("QTE bootstrap") {
  const TreatmentSample s = pareto_arms(5000, 2.0, 4.0, 0.5, 9);
  const PropensitySpec spec{1, std::nullopt};
  const QteEstimate a = qte_bootstrap(s, spec, 0.05, 0.005, 50, 3);
  const QteEstimate b = qte_bootstrap(s, spec, 0.05, 0.005, 50, 3);
  REQUIRE(a.ci.has_value());
  CHECK(a.ci->lower == b.ci->lower);
  CHECK(a.ci->upper == b.ci->upper);
  CHECK(a.n_boot == 50);

  const TreatmentSample big = pareto_arms(50000, 2.0, 4.0, 0.5, 10);
  const QteEstimate c = qte_bootstrap(big, spec, 0.05, 0.005, 50, 3);
  CHECK(c.ci->upper - c.ci->lower < a.ci->upper - a.ci->lower);
}

TEST_CASE("null effect intervals cover zero") {
  int covered = 0;
  for (std::uint64_t rep = 0; rep < 30; ++rep) {
    const TreatmentSample s = pareto_arms(4000, 3.0, 3.0, 0.5, derive_seed(12, rep));
    const QteEstimate e = qte_bootstrap(s, PropensitySpec{1, std::nullopt}, 0.05, 0.005, 100, rep);
    CHECK(std::abs(e.qte) < 10.0);
    covered += e.ci->contains(0.0);
  }
  CHECK(covered >= 27);
}
