#pragma once

#include "tailcausal/coef_matrix.hpp"
#include "tailcausal/graph.hpp"
#include "tailcausal/series.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tailcausal {

enum class ModelKind { linear, maxlinear };

/// A DAG with one weight per edge: β for an LSCM (nonzero), c for an RMLM
/// (strictly positive). Self weights are implicitly 1.
class WeightedDag {
 public:
  WeightedDag(Dag dag, std::map<Edge, double> weights, ModelKind kind);

  const Dag& dag() const noexcept { return dag_; }
  const std::map<Edge, double>& weights() const noexcept { return weights_; }
  ModelKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return dag_.size(); }
  double weight(Vertex from, Vertex to) const;  // throws ArgumentError if no such edge

 private:
  Dag dag_;
  std::map<Edge, double> weights_;
  ModelKind kind_;
};

/// Product of the edge weights along `path`.
double path_weight(const WeightedDag& wd, const Path& path);

/// LSCM noise representation: (i, j) = sum over paths i -> j of path weights, 1 on the diagonal.
CoefMatrix linear_noise_coefficients(const WeightedDag& wd);

/// Max-times Kleene star: (i, j) = max over paths i -> j of path weights, 1 on the diagonal.
CoefMatrix ml_coefficient_matrix(const WeightedDag& wd);

/// Column-wise rescaling b̄_ij = b_ij / (sum_k b_kj^alpha)^(1/alpha).
CoefMatrix standardize_ml(const CoefMatrix& b, double alpha);

/// Tail dependence χ(i, j) = sum_k min(b̄_ki^alpha, b̄_kj^alpha) of the RMLM with
/// ML matrix `b` and alpha-regularly varying innovations.
Matrix chi_matrix(const CoefMatrix& b, double alpha);

/// Keeps edge (i, j) iff it is the only max-weighted path from i to j.
Dag minimum_ml_dag(const WeightedDag& wd);

struct RepresentationCheck {
  bool valid = true;
  char failed_condition = 0;  ///< 'a'..'d' for the first violated condition, 0 if valid
  std::string detail;

  explicit operator bool() const noexcept { return valid; }
};

/// Whether `candidate` generates the same distribution as `reference`:
///   (a) the minimum ML DAG of the reference is a subgraph of the candidate,
///   (b) both have the same reachability,
///   (c) edges of the minimum ML DAG keep their reference weight,
///   (d) every other candidate edge (k, j) has weight in (0, b_kj].
RepresentationCheck is_valid_representation(const WeightedDag& candidate, const WeightedDag& reference);

/// Noise / innovation law.
struct NoiseSpec {
  enum class Family {
    pareto,          ///< P(e > x) = x^-alpha on [1, inf)
    frechet,         ///< P(e <= x) = exp(-x^-alpha) on (0, inf)
    student_t,       ///< alpha degrees of freedom, two-sided
    point_mass,      ///< deterministic per-vertex values
    one_plus_lomax,  ///< 1 + scale * (Pareto(alpha) - 1), support [1, inf), atom-free
  };

  Family family = Family::frechet;
  double alpha = 2.0;
  double scale = 1.0;
  std::vector<double> values;

  static NoiseSpec pareto(double alpha);
  static NoiseSpec frechet(double alpha);
  static NoiseSpec student_t(double alpha);
  static NoiseSpec point_mass(std::vector<double> values);
  static NoiseSpec one_plus_lomax(double alpha, double scale);

  /// Parses `pareto:2.5`, `frechet:2`, `student_t:3`, `lomax:2:0.1`, `point:1,1,1`.
  static NoiseSpec parse(const std::string& text);
  std::string describe() const;

  double lower_support() const noexcept;
};

/// n x d matrix of independent draws, generated row by row from one engine.
Matrix draw_noise(const NoiseSpec& spec, std::size_t n, std::size_t d, std::uint64_t seed);

/// Recursion X_j = sum_k β_jk X_k + e_j, evaluated in topological order per row.
Matrix propagate_lscm(const WeightedDag& wd, const Matrix& noise);
/// Recursion X_j = max(max_k c_kj X_k, e_j).
Matrix propagate_rmlm(const WeightedDag& wd, const Matrix& innovations);
/// Recursion U_j = max(max_k c_kj U_k, e_j) * Z_j.
Matrix propagate_rmlm_noisy(const WeightedDag& wd, const Matrix& innovations, const Matrix& z);

SeriesTable sample_lscm(const WeightedDag& wd, const NoiseSpec& noise, std::size_t n, std::uint64_t seed);
SeriesTable sample_rmlm(const WeightedDag& wd, const NoiseSpec& innovations, std::size_t n, std::uint64_t seed);
/// Innovations use `seed`, propagating noise Z uses derive_seed(seed, 1), so
/// Z ≡ 1 reproduces sample_rmlm exactly.
SeriesTable sample_rmlm_noisy(const WeightedDag& wd, const NoiseSpec& innovations, const NoiseSpec& z, std::size_t n,
                              std::uint64_t seed);

}  // namespace tailcausal
