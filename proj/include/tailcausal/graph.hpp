#pragma once

#include "tailcausal/coef_matrix.hpp"

#include <compare>
#include <cstddef>
#include <vector>

namespace tailcausal {

/// Vertices are 0-based in the C++ and Python APIs. The DAG text format,
/// the CLI and the reports use 1-based labels.
using Vertex = std::size_t;

struct Edge {
  Vertex from = 0;
  Vertex to = 0;

  auto operator<=>(const Edge&) const = default;
};

/// Directed acyclic graph on vertices 0..d-1. Acyclicity, label range and
/// the absence of self loops are checked on construction; duplicate edges
/// are merged.
class Dag {
 public:
  Dag() = default;
  explicit Dag(std::size_t d) : Dag(d, {}) {}
  Dag(std::size_t d, std::vector<Edge> edges);

  std::size_t size() const noexcept { return parents_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<Vertex>& parents(Vertex v) const { return parents_.at(v); }
  const std::vector<Vertex>& children(Vertex v) const { return children_.at(v); }
  bool has_edge(Vertex from, Vertex to) const;

  friend bool operator==(const Dag& a, const Dag& b) { return a.edges_ == b.edges_ && a.size() == b.size(); }

 private:
  std::vector<Edge> edges_;  // sorted, unique
  std::vector<std::vector<Vertex>> parents_;
  std::vector<std::vector<Vertex>> children_;
};

/// A directed path [k_0 -> k_1 -> ... -> k_n] with n >= 1 and distinct vertices.
class Path {
 public:
  explicit Path(std::vector<Vertex> vertices);

  const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
  std::size_t length() const noexcept { return vertices_.size() - 1; }
  Vertex source() const noexcept { return vertices_.front(); }
  Vertex target() const noexcept { return vertices_.back(); }

  friend bool operator==(const Path&, const Path&) = default;

 private:
  std::vector<Vertex> vertices_;
};

/// Kahn's algorithm; among ready vertices the smallest label is emitted first.
std::vector<Vertex> topological_order(const Dag& dag);

/// r_ij = 1 iff there is a directed path i -> j or i == j.
CoefMatrix reachability(const Dag& dag);

/// All directed paths from `from` to `to`, in lexicographic vertex order.
/// Exponential in general; meant for oracles on small graphs.
std::vector<Path> enumerate_paths(const Dag& dag, Vertex from, Vertex to);

}  // namespace tailcausal
