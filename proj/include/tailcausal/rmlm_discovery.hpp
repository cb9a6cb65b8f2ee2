#pragma once

#include "tailcausal/coef_matrix.hpp"
#include "tailcausal/graph.hpp"
#include "tailcausal/series.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace tailcausal {

struct SpectralEstimate {
  CoefMatrix sigma{CoefKind::scalings, {}};
  std::size_t k_exceed = 0;
};

inline constexpr double kDefaultSpectralKFrac = 0.02;

/// Scalings σ²_ij from the empirical spectral measure: margins rank-mapped to
/// Fréchet(2), the ceil(k_frac n) rows of largest L2 radius projected on the
/// unit sphere, σ²_ij = mean ω_i ω_j rescaled to a unit diagonal.
SpectralEstimate spectral_scalings(const SeriesTable& table, double k_frac = kDefaultSpectralKFrac);

struct MlReconstruction {
  CoefMatrix bbar{CoefKind::ml_standardized, {}};
  double clipped_mass = 0.0;  ///< total magnitude of negative entries set to 0
};

/// Nonnegative B̄, upper triangular in `order` (identity if absent), with
/// B̄ᵀB̄ = Σ. Entry (i, j) is the coefficient of innovation i in node j.
MlReconstruction reconstruct_ml_from_scalings(const SpectralEstimate& sigma,
                                              const std::optional<std::vector<Vertex>>& order = std::nullopt);

/// r_ij = 1 iff i != j and b̄_ij > edge_threshold; diagonal 1.
CoefMatrix rmlm_reachability(const CoefMatrix& bbar, double edge_threshold = 0.05);

struct TreeScoreMatrix {
  CoefMatrix w{CoefKind::score, {}};  ///< NaN on the diagonal
  Eigen::MatrixXi n_used;             ///< size of each conditional difference set
  double r = 0.75;
  double alpha_level = 0.9;
};

inline constexpr std::size_t kMinTreeExceedances = 20;

/// w_ij = (mean D - Q_D(r))^2 / n_ij with D = {log X_i - log X_j : X_j > Q_{X_j}(alpha_level)}.
TreeScoreMatrix tree_scores(const SeriesTable& table, double alpha_level = 0.9, double r = 0.75);

/// Chu-Liu/Edmonds: parent[v] for every v != root minimizing
/// sum_v cost(parent[v], v) over spanning arborescences rooted at `root`.
/// parent[root] == root. NaN or infinite costs mark missing edges.
std::vector<Vertex> min_out_arborescence(const Matrix& cost, Vertex root);

/// Minimum spanning tree with every edge oriented toward `root`; the edge
/// a -> b costs w(b, a), i.e. the score conditioning on the cause a.
Dag min_arborescence(const TreeScoreMatrix& w, Vertex root);

}  // namespace tailcausal
