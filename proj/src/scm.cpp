#include "tailcausal/scm.hpp"

#include "tailcausal/error.hpp"
#include "tailcausal/random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace tailcausal {
namespace {

Eigen::Index ix(std::size_t v) { return static_cast<Eigen::Index>(v); }

std::string edge_name(Edge e) { return "(" + std::to_string(e.from + 1) + "," + std::to_string(e.to + 1) + ")"; }

double parse_number(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ArgumentError("expected a number in noise spec, got '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double draw_one(const NoiseSpec& spec, Engine& g) {
  switch (spec.family) {
    case NoiseSpec::Family::pareto:
      return std::pow(uniform_open(g), -1.0 / spec.alpha);
    case NoiseSpec::Family::frechet:
      return std::pow(-std::log(uniform_open(g)), -1.0 / spec.alpha);
    case NoiseSpec::Family::one_plus_lomax:
      return 1.0 + spec.scale * (std::pow(uniform_open(g), -1.0 / spec.alpha) - 1.0);
    case NoiseSpec::Family::student_t: {
      // Bailey's polar method
      while (true) {
        const double u = 2.0 * uniform_open(g) - 1.0;
        const double v = 2.0 * uniform_open(g) - 1.0;
        const double w = u * u + v * v;
        if (w >= 1.0 || w == 0.0) continue;
        const double nu = spec.alpha;
        return u * std::sqrt(nu * (std::pow(w, -2.0 / nu) - 1.0) / w);
      }
    }
    case NoiseSpec::Family::point_mass:
      break;
  }
  return 0.0;
}

void check_rows(const WeightedDag& wd, const Matrix& m, const char* what) {
  if (static_cast<std::size_t>(m.cols()) != wd.size()) {
    throw ArgumentError(std::string(what) + " matrix must have one column per vertex");
  }
}

}  // namespace

WeightedDag::WeightedDag(Dag dag, std::map<Edge, double> weights, ModelKind kind)
    : dag_(std::move(dag)), weights_(std::move(weights)), kind_(kind) {
  for (const Edge& e : dag_.edges()) {
    auto it = weights_.find(e);
    if (it == weights_.end()) throw ArgumentError("edge " + edge_name(e) + " has no weight");
    if (!std::isfinite(it->second)) throw ArgumentError("edge " + edge_name(e) + " has a non-finite weight");
    if (kind_ == ModelKind::linear && it->second == 0.0) {
      throw ArgumentError("linear weight of edge " + edge_name(e) + " must be nonzero");
    }
    if (kind_ == ModelKind::maxlinear && !(it->second > 0.0)) {
      throw ArgumentError("max-linear weight of edge " + edge_name(e) + " must be strictly positive");
    }
  }
  if (weights_.size() != dag_.edges().size()) throw ArgumentError("weight given for an edge not in the graph");
}

double WeightedDag::weight(Vertex from, Vertex to) const {
  auto it = weights_.find(Edge{from, to});
  if (it == weights_.end()) throw ArgumentError("no edge " + edge_name(Edge{from, to}));
  return it->second;
}

double path_weight(const WeightedDag& wd, const Path& path) {
  const auto& v = path.vertices();
  double w = 1.0;
  for (std::size_t l = 0; l + 1 < v.size(); ++l) w *= wd.weight(v[l], v[l + 1]);
  return w;
}

CoefMatrix linear_noise_coefficients(const WeightedDag& wd) {
  if (wd.kind() != ModelKind::linear) throw ArgumentError("linear_noise_coefficients needs a linear model");
  const std::size_t d = wd.size();
  CoefMatrix out{CoefKind::linear_noise, Matrix::Identity(ix(d), ix(d))};
  for (Vertex j : topological_order(wd.dag())) {
    for (Vertex k : wd.dag().parents(j)) {
      out.values.col(ix(j)) += out.values.col(ix(k)) * wd.weight(k, j);
    }
  }
  return out;
}

CoefMatrix ml_coefficient_matrix(const WeightedDag& wd) {
  if (wd.kind() != ModelKind::maxlinear) throw ArgumentError("ml_coefficient_matrix needs a max-linear model");
  const std::size_t d = wd.size();
  CoefMatrix out{CoefKind::ml, Matrix::Identity(ix(d), ix(d))};
  for (Vertex j : topological_order(wd.dag())) {
    for (Vertex k : wd.dag().parents(j)) {
      const double c = wd.weight(k, j);
      for (std::size_t i = 0; i < d; ++i) {
        out.values(ix(i), ix(j)) = std::max(out.values(ix(i), ix(j)), out.values(ix(i), ix(k)) * c);
      }
    }
  }
  return out;
}

CoefMatrix standardize_ml(const CoefMatrix& b, double alpha) {
  if (!(alpha > 0.0)) throw ArgumentError("tail index must be positive");
  CoefMatrix out{CoefKind::ml_standardized, b.values};
  for (Eigen::Index j = 0; j < out.values.cols(); ++j) {
    double norm = 0.0;
    for (Eigen::Index k = 0; k < out.values.rows(); ++k) norm += std::pow(out.values(k, j), alpha);
    norm = std::pow(norm, 1.0 / alpha);
    out.values.col(j) /= norm;
  }
  return out;
}

Matrix chi_matrix(const CoefMatrix& b, double alpha) {
  const Matrix powered = standardize_ml(b, alpha).values.array().pow(alpha).matrix();
  const Eigen::Index d = powered.cols();
  Matrix chi(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j) {
      const double v = std::clamp(powered.col(i).cwiseMin(powered.col(j)).sum(), 0.0, 1.0);
      chi(i, j) = v;
      chi(j, i) = v;
    }
  }
  return chi;
}

Dag minimum_ml_dag(const WeightedDag& wd) {
  const CoefMatrix b = ml_coefficient_matrix(wd);
  std::vector<Edge> kept;
  for (const auto& [e, c] : wd.weights()) {
    double other = 0.0;  // best weight of a path i -> j that does not end with the direct edge
    for (Vertex k : wd.dag().parents(e.to)) {
      if (k == e.from) continue;
      other = std::max(other, b(e.from, k) * wd.weight(k, e.to));
    }
    if (c > other) kept.push_back(e);
  }
  return Dag(wd.size(), std::move(kept));
}

RepresentationCheck is_valid_representation(const WeightedDag& candidate, const WeightedDag& reference) {
  if (candidate.kind() != ModelKind::maxlinear || reference.kind() != ModelKind::maxlinear) {
    throw ArgumentError("representation check needs two max-linear models");
  }
  if (candidate.size() != reference.size()) throw ArgumentError("models have different vertex counts");

  const Dag minimal = minimum_ml_dag(reference);
  const CoefMatrix b = ml_coefficient_matrix(reference);
  auto fail = [](char c, std::string detail) { return RepresentationCheck{false, c, std::move(detail)}; };

  for (const Edge& e : minimal.edges()) {
    if (!candidate.dag().has_edge(e.from, e.to)) {
      return fail('a', "minimum ML DAG edge " + edge_name(e) + " is missing from the candidate");
    }
  }
  if (reachability(candidate.dag()).values != reachability(minimal).values) {
    return fail('b', "reachability differs from the minimum ML DAG");
  }
  for (const Edge& e : minimal.edges()) {
    if (candidate.weight(e.from, e.to) != reference.weight(e.from, e.to)) {
      return fail('c', "weight of minimum ML DAG edge " + edge_name(e) + " differs from the reference");
    }
  }
  for (const auto& [e, c] : candidate.weights()) {
    if (minimal.has_edge(e.from, e.to)) continue;
    if (!(c > 0.0 && c <= b(e.from, e.to))) {
      std::ostringstream msg;
      msg << "weight " << c << " of edge " << edge_name(e) << " is outside (0, " << b(e.from, e.to) << "]";
      return fail('d', msg.str());
    }
  }
  return {};
}

NoiseSpec NoiseSpec::pareto(double alpha) {
  if (!(alpha > 0.0)) throw ArgumentError("tail index must be positive");
  return {Family::pareto, alpha, 1.0, {}};
}

NoiseSpec NoiseSpec::frechet(double alpha) {
  if (!(alpha > 0.0)) throw ArgumentError("tail index must be positive");
  return {Family::frechet, alpha, 1.0, {}};
}

NoiseSpec NoiseSpec::student_t(double alpha) {
  if (!(alpha > 0.0)) throw ArgumentError("degrees of freedom must be positive");
  return {Family::student_t, alpha, 1.0, {}};
}

NoiseSpec NoiseSpec::point_mass(std::vector<double> values) {
  return {Family::point_mass, 1.0, 1.0, std::move(values)};
}

NoiseSpec NoiseSpec::one_plus_lomax(double alpha, double scale) {
  if (!(alpha > 0.0) || !(scale > 0.0)) throw ArgumentError("lomax noise needs positive alpha and scale");
  return {Family::one_plus_lomax, alpha, scale, {}};
}

NoiseSpec NoiseSpec::parse(const std::string& text) {
  const auto parts = split(text, ':');
  const std::string_view family = parts[0];
  if (family == "point" && parts.size() == 2) {
    std::vector<double> values;
    for (auto v : split(parts[1], ',')) values.push_back(parse_number(v));
    return point_mass(std::move(values));
  }
  if (family == "lomax" && parts.size() == 3) return one_plus_lomax(parse_number(parts[1]), parse_number(parts[2]));
  if (parts.size() == 2) {
    const double a = parse_number(parts[1]);
    if (family == "pareto") return pareto(a);
    if (family == "frechet") return frechet(a);
    if (family == "student_t" || family == "t") return student_t(a);
  }
  throw ArgumentError("unrecognized noise spec '" + text + "'");
}

std::string NoiseSpec::describe() const {
  std::ostringstream out;
  out.precision(17);
  switch (family) {
    case Family::pareto: out << "pareto:" << alpha; break;
    case Family::frechet: out << "frechet:" << alpha; break;
    case Family::student_t: out << "student_t:" << alpha; break;
    case Family::one_plus_lomax: out << "lomax:" << alpha << ':' << scale; break;
    case Family::point_mass:
      out << "point:";
      for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << values[i];
      break;
  }
  return out.str();
}

double NoiseSpec::lower_support() const noexcept {
  switch (family) {
    case Family::pareto:
    case Family::one_plus_lomax: return 1.0;
    case Family::frechet: return 0.0;
    case Family::student_t: return -std::numeric_limits<double>::infinity();
    case Family::point_mass:
      return values.empty() ? 0.0 : *std::min_element(values.begin(), values.end());
  }
  return 0.0;
}

Matrix draw_noise(const NoiseSpec& spec, std::size_t n, std::size_t d, std::uint64_t seed) {
  if (spec.family == NoiseSpec::Family::point_mass && spec.values.size() != d) {
    throw ArgumentError("point-mass noise needs one value per vertex");
  }
  Matrix out(ix(n), ix(d));
  Engine g = make_engine(seed);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < d; ++j) {
      out(ix(r), ix(j)) = spec.family == NoiseSpec::Family::point_mass ? spec.values[j] : draw_one(spec, g);
    }
  }
  return out;
}

Matrix propagate_lscm(const WeightedDag& wd, const Matrix& noise) {
  if (wd.kind() != ModelKind::linear) throw ArgumentError("LSCM recursion needs a linear model");
  check_rows(wd, noise, "noise");
  Matrix x = noise;
  for (Vertex j : topological_order(wd.dag())) {
    for (Vertex k : wd.dag().parents(j)) x.col(ix(j)) += wd.weight(k, j) * x.col(ix(k));
  }
  return x;
}

Matrix propagate_rmlm(const WeightedDag& wd, const Matrix& innovations) {
  if (wd.kind() != ModelKind::maxlinear) throw ArgumentError("RMLM recursion needs a max-linear model");
  check_rows(wd, innovations, "innovation");
  Matrix x = innovations;
  for (Vertex j : topological_order(wd.dag())) {
    for (Vertex k : wd.dag().parents(j)) {
      x.col(ix(j)) = x.col(ix(j)).cwiseMax(wd.weight(k, j) * x.col(ix(k)));
    }
  }
  return x;
}

Matrix propagate_rmlm_noisy(const WeightedDag& wd, const Matrix& innovations, const Matrix& z) {
  if (wd.kind() != ModelKind::maxlinear) throw ArgumentError("RMLM recursion needs a max-linear model");
  check_rows(wd, innovations, "innovation");
  if (z.rows() != innovations.rows() || z.cols() != innovations.cols()) {
    throw ArgumentError("noise matrix Z must match the innovation matrix");
  }
  Matrix u = innovations;
  for (Vertex j : topological_order(wd.dag())) {
    for (Vertex k : wd.dag().parents(j)) {
      u.col(ix(j)) = u.col(ix(j)).cwiseMax(wd.weight(k, j) * u.col(ix(k)));
    }
    u.col(ix(j)) = u.col(ix(j)).cwiseProduct(z.col(ix(j)));
  }
  return u;
}

SeriesTable sample_lscm(const WeightedDag& wd, const NoiseSpec& noise, std::size_t n, std::uint64_t seed) {
  return SeriesTable::from_matrix(propagate_lscm(wd, draw_noise(noise, n, wd.size(), seed)));
}

SeriesTable sample_rmlm(const WeightedDag& wd, const NoiseSpec& innovations, std::size_t n, std::uint64_t seed) {
  if (innovations.lower_support() < 0.0) throw ArgumentError("RMLM innovations must be nonnegative");
  return SeriesTable::from_matrix(propagate_rmlm(wd, draw_noise(innovations, n, wd.size(), seed)));
}

SeriesTable sample_rmlm_noisy(const WeightedDag& wd, const NoiseSpec& innovations, const NoiseSpec& z, std::size_t n,
                              std::uint64_t seed) {
  if (innovations.lower_support() < 0.0) throw ArgumentError("RMLM innovations must be nonnegative");
  if (z.lower_support() < 1.0) throw ArgumentError("propagating noise Z must be supported in [1, inf)");
  const Matrix eps = draw_noise(innovations, n, wd.size(), seed);
  const Matrix zz = draw_noise(z, n, wd.size(), derive_seed(seed, 1));
  return SeriesTable::from_matrix(propagate_rmlm_noisy(wd, eps, zz));
}

}  // namespace tailcausal
