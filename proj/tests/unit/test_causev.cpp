#include "tailcausal/causev.hpp"
#include "tailcausal/copula.hpp"
#include "tailcausal/error.hpp"
#include "tailcausal/random.hpp"
#include "tailcausal/scm.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace tailcausal;

namespace {

// Marshall-Olkin sampler: positive stable frailty with index 1/theta.
void gumbel_sample(double theta, std::size_t n, std::uint64_t seed, std::vector<double>& u, std::vector<double>& v) {
  Engine g = make_engine(seed);
  const double a = 1.0 / theta;
  u.resize(n);
  v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 1.0;
    if (a < 1.0) {
      const double ang = std::numbers::pi * uniform_open(g);
      const double w = -std::log(uniform_open(g));
      s = std::sin(a * ang) / std::pow(std::sin(ang), 1.0 / a) * std::pow(std::sin((1.0 - a) * ang) / w, (1.0 - a) / a);
    }
    const double e1 = -std::log(uniform_open(g));
    const double e2 = -std::log(uniform_open(g));
    u[i] = std::exp(-std::pow(e1 / s, a));
    v[i] = std::exp(-std::pow(e2 / s, a));
  }
}

WeightedDag pair_rmlm(double c = 1.0) {
  return WeightedDag(Dag(2, {{0, 1}}), {{{0, 1}, c}}, ModelKind::maxlinear);
}


}  // namespace

TEST_CASE("Gumbel copula functions") {
  CHECK(gumbel_cdf(0.3, 0.6, 1.0) == doctest::Approx(0.18).epsilon(1e-14));
  CHECK(gumbel_cdf(0.3, 0.6, 50.0) == doctest::Approx(0.3).epsilon(1e-3));
  CHECK_THROWS_AS(gumbel_cdf(0.3, 0.6, 0.5), ArgumentError);

  for (double theta : {1.0, 1.7, 4.0}) {
    for (double uu : {0.2, 0.7, 0.95}) {
      for (double vv : {0.1, 0.5, 0.9}) {
        const double h = 1e-5;
        const double dcdu = (gumbel_cdf(uu + h, vv, theta) - gumbel_cdf(uu - h, vv, theta)) / (2 * h);
        CHECK(gumbel_conditional_cdf(vv, uu, theta) == doctest::Approx(dcdu).epsilon(1e-6));
        const double dens = (gumbel_cdf(uu + h, vv + h, theta) - gumbel_cdf(uu + h, vv - h, theta) -
                             gumbel_cdf(uu - h, vv + h, theta) + gumbel_cdf(uu - h, vv - h, theta)) /
                            (4 * h * h);
        CHECK(std::exp(gumbel_log_density(uu, vv, theta)) == doctest::Approx(dens).epsilon(1e-4));
        const double q = gumbel_conditional_quantile(vv, uu, theta);
        CHECK(std::abs(gumbel_conditional_cdf(q, uu, theta) - vv) <= 1e-7);
      }
    }
  }
}

TEST_CASE("Gumbel fit") {
  std::vector<double> u, v;
  gumbel_sample(2.0, 3000, 1, u, v);
  const GumbelFit f = fit_gumbel(u, v);
  CHECK(f.se_theta > 0.0);
  CHECK(std::abs(f.theta - 2.0) <= 3.0 * f.se_theta);
  CHECK_FALSE(f.saturated);

  int covered = 0;
  for (std::uint64_t rep = 0; rep < 50; ++rep) {
    gumbel_sample(2.0, 1000, 100 + rep, u, v);
    const GumbelFit r = fit_gumbel(u, v);
    covered += std::abs(r.theta - 2.0) <= 3.0 * r.se_theta;
  }
  CHECK(covered >= 47);

  gumbel_sample(1.0, 3000, 2, u, v);
  CHECK(fit_gumbel(u, v).theta <= 1.1);

  const GumbelFit sat = fit_gumbel(u, u);
  CHECK(sat.saturated);
  CHECK(sat.theta == doctest::Approx(kGumbelThetaMax).epsilon(1e-3));
  CHECK_THROWS_AS(fit_gumbel(std::vector<double>{0.5, 1.0}, std::vector<double>{0.5, 0.5}), DomainError);
}

TEST_CASE("pair model") {
  Engine g = make_engine(4);
  std::vector<double> x(60000), y(60000);
  for (auto& v : x) v = std::pow(-std::log(uniform_open(g)), -0.5);
  for (auto& v : y) v = std::pow(-std::log(uniform_open(g)), -0.5);
  const ExtremePairModel ind = fit_pair_model(x, y);
  CHECK(ind.n_quadrant >= 500);
  CHECK(ind.copula.theta <= 1.1);
  CHECK(ind.copula.theta >= 1.0);

  const ExtremePairModel co = fit_pair_model(x, x);
  CHECK(co.copula.saturated);
  CHECK(co.n_quadrant == 6000);

  std::vector<double> few(x.begin(), x.begin() + 200);
  std::vector<double> fy(y.begin(), y.begin() + 200);
  CHECK_THROWS_AS(fit_pair_model(few, fy), SampleSizeError);
}

TEST_CASE("scores are complementary and grid-order free") {
  const SeriesTable t = sample_rmlm(pair_rmlm(), NoiseSpec::frechet(2.0), 20000, 5);
  const CausevScore s = causev_score(t.column(0), t.column(1));
  CHECK(std::abs(s.s_xy + s.s_yx - 1.0) <= 1e-12);
  const CausevScore r = causev_score(t.column(1), t.column(0));
  CHECK(std::abs(r.s_xy - s.s_yx) <= 1e-6);
  CHECK(s.s_xy > 0.5);

  std::vector<double> grid = default_tau_grid();
  CHECK(grid.size() == 9);
  std::reverse(grid.begin(), grid.end());
  std::swap(grid[2], grid[6]);
  CHECK(causev_score(t.column(0), t.column(1), 0.9, grid).s_xy == s.s_xy);
  CHECK_THROWS_AS(causev_score(t.column(0), t.column(1), 0.9, std::vector<double>{0.5, 1.0}), ArgumentError);
}

TEST_CASE("simulated causal pairs score above one half") {
  int right = 0;
  for (std::uint64_t rep = 0; rep < 10; ++rep) {
    const SeriesTable t = sample_rmlm(pair_rmlm(), NoiseSpec::frechet(2.0), 20000, derive_seed(31, rep));
    right += causev_score(t.column(0), t.column(1)).s_xy > 0.5;
  }
  CHECK(right >= 9);
}

TEST_CASE("exchangeable pair scores near one half") {
  // X = max(e1, e2), Y = max(e1, e3)
  const WeightedDag v(Dag(3, {{0, 1}, {0, 2}}), {{{0, 1}, 1.0}, {{0, 2}, 1.0}}, ModelKind::maxlinear);
  double mean = 0.0;
  for (std::uint64_t rep = 0; rep < 5; ++rep) {
    const SeriesTable t = sample_rmlm(v, NoiseSpec::frechet(2.0), 20000, derive_seed(8, rep));
    mean += causev_score(t.column(1), t.column(2)).s_xy / 5.0;
  }
  CHECK(std::abs(mean - 0.5) <= 0.03);
}

TEST_CASE("direction decisions") {
  CHECK(decide_direction({0.505, 0.575}) == Direction::x_to_y);
  CHECK(decide_direction({0.538, 0.585}) == Direction::x_to_y);
  CHECK(decide_direction({0.465, 0.521}) == Direction::none);
  CHECK(decide_direction({0.40, 0.47}) == Direction::y_to_x);
  CHECK(decide_direction({0.45, 0.5}) == Direction::none);
  CHECK(std::string(to_string(Direction::x_to_y)) != std::string(to_string(Direction::none)));
}

TEST_CASE("bootstrap direction") {
  const SeriesTable t = sample_rmlm(pair_rmlm(), NoiseSpec::frechet(2.0), 5000, 6);
  CausevOptions opt;
  opt.n_boot = 100;
  const CausevDecision a = causev_direction(t, 0, 1, opt, 11);
  const CausevDecision b = causev_direction(t, 0, 1, opt, 11);
  CHECK(a.ci.lower == b.ci.lower);
  CHECK(a.ci.upper == b.ci.upper);
  CHECK_FALSE(a.by_year);
  CHECK(a.n_boot == 100);
  CHECK(a.ci.lower <= a.ci.upper);
  CHECK(a.direction == decide_direction(a.ci));

  // more replicates do not flip a clear decision
  opt.n_boot = 300;
  const CausevDecision c = causev_direction(t, 0, 1, opt, 11);
  const double margin = std::max(a.ci.lower - 0.5, 0.5 - a.ci.upper);
  if (margin > 0.5 * (a.ci.upper - a.ci.lower)) CHECK(c.direction == a.direction);

  CHECK_THROWS_AS(causev_direction(t, 0, 0, opt, 1), ArgumentError);
}
