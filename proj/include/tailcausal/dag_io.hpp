#pragma once

#include "tailcausal/graph.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace tailcausal {

/// Parsed DAG fixture. Text format, one statement per line:
///
///     # comment
///     nodes 4          (optional; declares vertices that carry no edge)
///     1 -> 2 0.5       (1-based labels, weight optional)
///
/// The vertex count is the larger of the `nodes` value and the largest label.
struct DagFile {
  Dag dag;
  std::map<Edge, double> weights;  ///< 0-based edges that carried a weight

  bool fully_weighted() const { return weights.size() == dag.edges().size(); }
};

DagFile parse_dag_text(std::string_view text);
DagFile load_dag_file(const std::filesystem::path& path);

/// Inverse of parse_dag_text; weights are written with 17 significant digits.
std::string format_dag_text(const Dag& dag, const std::map<Edge, double>& weights = {});

}  // namespace tailcausal
