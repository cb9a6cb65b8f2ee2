#pragma once

#include "tailcausal/coef_matrix.hpp"
#include "tailcausal/graph.hpp"
#include "tailcausal/series.hpp"
#include "tailcausal/tail_stats.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace tailcausal {

struct StructureComparison {
  std::size_t distance = 0;
  std::vector<Edge> mismatches;  ///< off-diagonal cells (i, j) where the matrices differ
  std::size_t d = 0;
};

/// Number of off-diagonal cells where the two reachability matrices differ.
StructureComparison reachability_distance(const CoefMatrix& estimate, const CoefMatrix& truth);

/// A discovery pipeline: data and replicate seed in, reachability matrix out.
using StructurePipeline = std::function<CoefMatrix(const SeriesTable&, std::uint64_t)>;

struct StructureCi {
  Interval ci;
  std::vector<double> distances;  ///< successful replicates, in replicate order
  std::size_t n_failed = 0;
};

/// Percentile interval of the distance to `truth` over year-bootstrap re-runs.
/// Replicate r resamples with derive_seed(seed, r) and runs the pipeline with
/// derive_seed(seed, r + n_boot).
StructureCi bootstrap_structure_ci(const StructurePipeline& pipeline, const SeriesTable& table, const CoefMatrix& truth,
                                   std::size_t n_boot, std::uint64_t seed, double level = 0.95);

}  // namespace tailcausal
