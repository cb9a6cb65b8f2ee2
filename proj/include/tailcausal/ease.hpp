#pragma once

#include "tailcausal/coef_matrix.hpp"
#include "tailcausal/graph.hpp"
#include "tailcausal/scm.hpp"
#include "tailcausal/series.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace tailcausal {

/// Causal tail coefficients. Diagonal is NaN. k_used(j, k) is the number of
/// extremes of X_j averaged over (0 for population matrices).
struct GammaMatrix {
  CoefMatrix gamma{CoefKind::gamma, {}};
  Eigen::MatrixXi k_used;

  std::size_t size() const noexcept { return gamma.size(); }
  double operator()(std::size_t j, std::size_t k) const { return gamma(j, k); }
};

/// Γ_jk = 1/2 + 1/2 * sum_{h in An(j) ∩ An(k)} β'_hj^alpha / sum_{h in An(j)} β'_hj^alpha.
/// alpha is the tail index of the noise; alpha = 1 gives the unweighted form.
GammaMatrix gamma_population(const WeightedDag& wd, double alpha = 1.0);

/// ceil(k_frac * n), the number of extremes used for n joint observations.
std::size_t gamma_exceedances(std::size_t n, double k_frac);
/// k_frac giving max(ceil(n^(2/3)), 50) extremes.
double default_gamma_k_frac(std::size_t n);

/// Mean of rank(X_k)/(n+1) over the observations with the largest X_j.
double gamma_estimate(std::span<const double> x_j, std::span<const double> x_k, double k_frac);

/// All ordered pairs; k_frac <= 0 picks default_gamma_k_frac per pair.
GammaMatrix gamma_matrix(const SeriesTable& table, double k_frac = 0.0);

/// Greedy causal order: repeatedly emits the remaining node i minimizing
/// max_{j remaining} Γ_ji (lowest label on ties).
std::vector<Vertex> ease_order(const GammaMatrix& g);

/// r_ij = 1 iff i precedes j in `order` and Γ_ij >= 1 - edge_threshold.
CoefMatrix ease_reachability(const GammaMatrix& g, const std::vector<Vertex>& order, double edge_threshold = 0.1);

}  // namespace tailcausal
