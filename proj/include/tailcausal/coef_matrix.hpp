#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string_view>

namespace tailcausal {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// What a CoefMatrix holds. Indexing convention for every kind: entry (i, j)
/// relates vertex i (ancestor / innovation / row variable) to vertex j.
enum class CoefKind {
  linear_noise,     ///< B': (i, j) = coefficient of noise i in X_j for an LSCM
  ml,               ///< B: max-linear coefficients b_ij
  ml_standardized,  ///< B̄: columns with unit alpha-norm
  scalings,         ///< Σ: spectral scalings σ²_ij
  gamma,            ///< causal tail coefficients Γ_ij
  reachability,     ///< {0,1}; diagonal is 1
  score,            ///< pairwise discovery scores
};

std::string_view to_string(CoefKind kind) noexcept;

struct CoefMatrix {
  CoefKind kind = CoefKind::score;
  Matrix values;

  std::size_t size() const noexcept { return static_cast<std::size_t>(values.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
};

}  // namespace tailcausal
