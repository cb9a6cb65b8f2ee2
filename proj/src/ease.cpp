#include "tailcausal/ease.hpp"

#include "detail/ranks.hpp"
#include "tailcausal/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace tailcausal {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Eigen::Index ix(std::size_t v) { return static_cast<Eigen::Index>(v); }

}  // namespace

GammaMatrix gamma_population(const WeightedDag& wd, double alpha) {
  if (!(alpha > 0.0)) throw ArgumentError("tail index must be positive");
  const CoefMatrix b = linear_noise_coefficients(wd);
  const CoefMatrix an = reachability(wd.dag());
  const std::size_t d = wd.size();
  for (std::size_t h = 0; h < d; ++h) {
    for (std::size_t j = 0; j < d; ++j) {
      if (an(h, j) != 0.0 && !(b(h, j) > 0.0)) {
        throw DomainError("closed-form Γ needs positive path coefficients; use the empirical estimator");
      }
    }
  }
  GammaMatrix out;
  out.gamma.values = Matrix::Constant(ix(d), ix(d), kNaN);
  out.k_used = Eigen::MatrixXi::Zero(ix(d), ix(d));
  for (std::size_t j = 0; j < d; ++j) {
    double total = 0.0;
    for (std::size_t h = 0; h < d; ++h) {
      if (an(h, j) != 0.0) total += std::pow(b(h, j), alpha);
    }
    for (std::size_t k = 0; k < d; ++k) {
      if (k == j) continue;
      double shared = 0.0;
      for (std::size_t h = 0; h < d; ++h) {
        if (an(h, j) != 0.0 && an(h, k) != 0.0) shared += std::pow(b(h, j), alpha);
      }
      out.gamma.values(ix(j), ix(k)) = 0.5 + 0.5 * shared / total;
    }
  }
  return out;
}

std::size_t gamma_exceedances(std::size_t n, double k_frac) {
  if (!(k_frac > 0.0 && k_frac <= 1.0)) throw ArgumentError("k_frac must lie in (0, 1]");
  return static_cast<std::size_t>(std::ceil(k_frac * static_cast<double>(n) - 1e-9));
}

double default_gamma_k_frac(std::size_t n) {
  if (n == 0) throw SampleSizeError("no observations");
  const double k = std::max(std::ceil(std::cbrt(static_cast<double>(n) * static_cast<double>(n))), 50.0);
  return std::min(1.0, k / static_cast<double>(n));
}

double gamma_estimate(std::span<const double> x_j, std::span<const double> x_k, double k_frac) {
  const PairedSample p = paired_complete(x_j, x_k);
  const std::size_t n = p.x.size();
  if (n < 100) throw SampleSizeError("Γ estimate needs at least 100 joint observations, got " + std::to_string(n));
  const std::size_t m = gamma_exceedances(n, k_frac);
  if (m < 10) throw SampleSizeError("Γ estimate needs at least 10 extremes, k_frac gives " + std::to_string(m));

  const std::vector<double> ranks = detail::average_ranks(p.y);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return p.x[a] > p.x[b]; });
  double sum = 0.0;
  for (std::size_t t = 0; t < m; ++t) sum += ranks[idx[t]];
  return sum / (static_cast<double>(m) * static_cast<double>(n + 1));
}

GammaMatrix gamma_matrix(const SeriesTable& table, double k_frac) {
  const std::size_t d = table.cols();
  GammaMatrix out;
  out.gamma.values = Matrix::Constant(ix(d), ix(d), kNaN);
  out.k_used = Eigen::MatrixXi::Zero(ix(d), ix(d));
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < d; ++k) {
      if (j == k) continue;
      const std::size_t n = paired_complete(table.column(j), table.column(k)).x.size();
      const double kf = k_frac > 0.0 ? k_frac : default_gamma_k_frac(n);
      try {
        out.gamma.values(ix(j), ix(k)) = gamma_estimate(table.column(j), table.column(k), kf);
      } catch (const SampleSizeError& e) {
        throw SampleSizeError("pair (" + table.names()[j] + ", " + table.names()[k] + "): " + e.what());
      }
      out.k_used(ix(j), ix(k)) = static_cast<int>(gamma_exceedances(n, kf));
    }
  }
  return out;
}

std::vector<Vertex> ease_order(const GammaMatrix& g) {
  const std::size_t d = g.size();
  std::vector<Vertex> remaining(d);
  std::iota(remaining.begin(), remaining.end(), Vertex{0});
  std::vector<Vertex> order;
  order.reserve(d);
  while (!remaining.empty()) {
    std::size_t best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < remaining.size(); ++a) {
      const Vertex i = remaining[a];
      double worst = -std::numeric_limits<double>::infinity();
      for (Vertex j : remaining) {
        if (j == i) continue;
        const double v = g(j, i);
        if (std::isnan(v)) throw ArgumentError("Γ matrix has a missing off-diagonal entry");
        worst = std::max(worst, v);
      }
      if (worst < best_value - 1e-12) {
        best_value = worst;
        best = a;
      }
    }
    order.push_back(remaining[best]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return order;
}

CoefMatrix ease_reachability(const GammaMatrix& g, const std::vector<Vertex>& order, double edge_threshold) {
  const std::size_t d = g.size();
  if (order.size() != d) throw ArgumentError("order length does not match the Γ matrix");
  std::vector<std::size_t> pos(d, d);
  for (std::size_t t = 0; t < d; ++t) {
    if (order[t] >= d || pos[order[t]] != d) throw ArgumentError("order is not a permutation");
    pos[order[t]] = t;
  }
  CoefMatrix r{CoefKind::reachability, Matrix::Identity(ix(d), ix(d))};
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (i != j && pos[i] < pos[j] && g(i, j) >= 1.0 - edge_threshold) r.values(ix(i), ix(j)) = 1.0;
    }
  }
  return r;
}

}  // namespace tailcausal
