#include "tailcausal/eval.hpp"

#include "tailcausal/error.hpp"
#include "tailcausal/random.hpp"

namespace tailcausal {

StructureComparison reachability_distance(const CoefMatrix& estimate, const CoefMatrix& truth) {
  if (estimate.values.rows() != truth.values.rows() || estimate.values.cols() != truth.values.cols() ||
      estimate.values.rows() != estimate.values.cols()) {
    throw ArgumentError("reachability matrices differ in dimension");
  }
  StructureComparison out;
  out.d = estimate.size();
  for (std::size_t i = 0; i < out.d; ++i) {
    for (std::size_t j = 0; j < out.d; ++j) {
      if (i != j && (estimate(i, j) != 0.0) != (truth(i, j) != 0.0)) out.mismatches.push_back({i, j});
    }
  }
  out.distance = out.mismatches.size();
  return out;
}

StructureCi bootstrap_structure_ci(const StructurePipeline& pipeline, const SeriesTable& table, const CoefMatrix& truth,
                                   std::size_t n_boot, std::uint64_t seed, double level) {
  if (!table.has_dates()) throw ArgumentError("structure bootstrap resamples years and needs a date index");
  if (n_boot < 2) throw ArgumentError("n_boot must be at least 2");
  StructureCi out;
  out.distances.reserve(n_boot);
  for (std::size_t r = 0; r < n_boot; ++r) {
    try {
      const SeriesTable bs = bootstrap_years(table, derive_seed(seed, r));
      const CoefMatrix est = pipeline(bs, derive_seed(seed, r + n_boot));
      out.distances.push_back(static_cast<double>(reachability_distance(est, truth).distance));
    } catch (const Error&) {
      ++out.n_failed;
    }
  }
  if (out.n_failed * 10 > n_boot) {
    throw FitError(std::to_string(out.n_failed) + " of " + std::to_string(n_boot) + " bootstrap replicates failed");
  }
  out.ci = percentile_interval(out.distances, level);
  return out;
}

}  // namespace tailcausal
