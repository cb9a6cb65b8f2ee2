#include "tailcausal/rmlm_discovery.hpp"

#include "detail/ranks.hpp"
#include "tailcausal/error.hpp"
#include "tailcausal/tail_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace tailcausal {
namespace {

Eigen::Index ix(std::size_t v) { return static_cast<Eigen::Index>(v); }

constexpr std::size_t kMinSpectralRows = 500;
constexpr double kPsdTolerance = 1e-8;

}  // namespace

SpectralEstimate spectral_scalings(const SeriesTable& table, double k_frac) {
  if (!(k_frac > 0.0 && k_frac <= 1.0)) throw ArgumentError("k_frac must lie in (0, 1]");
  const Matrix x = table.complete_rows();
  const auto n = static_cast<std::size_t>(x.rows());
  const auto d = static_cast<std::size_t>(x.cols());
  if (n < kMinSpectralRows) {
    throw SampleSizeError("spectral scalings need at least 500 complete rows, got " + std::to_string(n));
  }

  Matrix z(ix(n), ix(d));
  for (std::size_t j = 0; j < d; ++j) {
    const Vector col = x.col(ix(j));
    const std::vector<double> r = detail::average_ranks(std::span<const double>(col.data(), n));
    for (std::size_t i = 0; i < n; ++i) {
      z(ix(i), ix(j)) = 1.0 / std::sqrt(-std::log(r[i] / static_cast<double>(n + 1)));
    }
  }
  const Vector radius = z.rowwise().norm();
  const auto k = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(k_frac * static_cast<double>(n) - 1e-9)));
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return radius(ix(a)) > radius(ix(b)); });

  Matrix s = Matrix::Zero(ix(d), ix(d));
  for (std::size_t t = 0; t < k; ++t) {
    const Vector w = z.row(ix(idx[t])).transpose() / radius(ix(idx[t]));
    s += w * w.transpose();
  }
  s /= static_cast<double>(k);
  const Vector scale = s.diagonal().cwiseSqrt();
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) s(ix(i), ix(j)) /= scale(ix(i)) * scale(ix(j));
  }
  s = 0.5 * (s + s.transpose()).eval();
  return {{CoefKind::scalings, s}, k};
}

MlReconstruction reconstruct_ml_from_scalings(const SpectralEstimate& est, const std::optional<std::vector<Vertex>>& order) {
  const Matrix& sigma = est.sigma.values;
  const auto d = static_cast<std::size_t>(sigma.rows());
  if (sigma.cols() != sigma.rows()) throw ArgumentError("scalings matrix must be square");
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > kPsdTolerance) {
    throw NumericError("scalings matrix is not symmetric");
  }
  if (d > 0) {
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -kPsdTolerance) throw NumericError("scalings matrix is not positive semidefinite");
  }

  std::vector<Vertex> perm(d);
  std::iota(perm.begin(), perm.end(), Vertex{0});
  if (order) {
    if (order->size() != d) throw ArgumentError("order length does not match the scalings matrix");
    std::vector<bool> seen(d, false);
    for (Vertex v : *order) {
      if (v >= d || seen[v]) throw ArgumentError("order is not a permutation");
      seen[v] = true;
    }
    perm = *order;
  }

  Matrix s(ix(d), ix(d));
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) s(ix(a), ix(b)) = sigma(ix(perm[a]), ix(perm[b]));
  }

  MlReconstruction out;
  Matrix r = Matrix::Zero(ix(d), ix(d));
  for (std::size_t j = 0; j < d; ++j) {
    double used = 0.0;
    for (std::size_t i = 0; i < j; ++i) {
      double v = 0.0;
      if (r(ix(i), ix(i)) > 0.0) {
        double dot = 0.0;
        for (std::size_t k = 0; k < i; ++k) dot += r(ix(k), ix(i)) * r(ix(k), ix(j));
        v = (s(ix(i), ix(j)) - dot) / r(ix(i), ix(i));
      }
      if (v < 0.0) {
        out.clipped_mass += -v;
        v = 0.0;
      }
      r(ix(i), ix(j)) = v;
      used += v * v;
    }
    const double rest = s(ix(j), ix(j)) - used;
    if (rest >= 0.0) {
      r(ix(j), ix(j)) = std::sqrt(rest);
    } else {
      // off-diagonal part already exceeds the column's mass: renormalize it
      out.clipped_mass += -rest;
      r.col(ix(j)) *= std::sqrt(s(ix(j), ix(j)) / used);
    }
  }

  out.bbar.values = Matrix::Zero(ix(d), ix(d));
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) out.bbar.values(ix(perm[a]), ix(perm[b])) = r(ix(a), ix(b));
  }
  return out;
}

CoefMatrix rmlm_reachability(const CoefMatrix& bbar, double edge_threshold) {
  const std::size_t d = bbar.size();
  CoefMatrix r{CoefKind::reachability, Matrix::Identity(ix(d), ix(d))};
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (i != j && bbar(i, j) > edge_threshold) r.values(ix(i), ix(j)) = 1.0;
    }
  }
  return r;
}

TreeScoreMatrix tree_scores(const SeriesTable& table, double alpha_level, double r) {
  if (!(alpha_level > 0.0 && alpha_level < 1.0)) throw ArgumentError("alpha_level must lie in (0, 1)");
  if (!(r > 0.0 && r < 1.0)) throw ArgumentError("r must lie in (0, 1)");
  const std::size_t d = table.cols();
  for (std::size_t j = 0; j < d; ++j) {
    for (double v : table.column(j)) {
      if (!is_missing(v) && !(v > 0.0)) {
        throw DomainError("tree scores take logs; column " + table.names()[j] + " has nonpositive values");
      }
    }
  }
  TreeScoreMatrix out;
  out.r = r;
  out.alpha_level = alpha_level;
  out.w.values = Matrix::Constant(ix(d), ix(d), std::numeric_limits<double>::quiet_NaN());
  out.n_used = Eigen::MatrixXi::Zero(ix(d), ix(d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (i == j) continue;
      const PairedSample p = paired_complete(table.column(i), table.column(j));
      if (p.x.empty()) throw SampleSizeError("columns " + table.names()[i] + " and " + table.names()[j] + " share no rows");
      const double q = empirical_quantile(p.y, alpha_level);
      std::vector<double> diff;
      for (std::size_t t = 0; t < p.x.size(); ++t) {
        if (p.y[t] > q) diff.push_back(std::log(p.x[t]) - std::log(p.y[t]));
      }
      if (diff.size() < kMinTreeExceedances) {
        throw SampleSizeError("pair (" + table.names()[i] + ", " + table.names()[j] + ") has " +
                              std::to_string(diff.size()) + " conditioning exceedances, need 20");
      }
      const double n_ij = static_cast<double>(diff.size());
      const double mean = std::accumulate(diff.begin(), diff.end(), 0.0) / n_ij;
      const double gap = mean - empirical_quantile(diff, r);
      out.w.values(ix(i), ix(j)) = gap * gap / n_ij;
      out.n_used(ix(i), ix(j)) = static_cast<int>(diff.size());
    }
  }
  return out;
}

}  // namespace tailcausal
