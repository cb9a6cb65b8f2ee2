#include "tailcausal/graph.hpp"

#include "tailcausal/error.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <string>

namespace tailcausal {

std::string_view to_string(CoefKind kind) noexcept {
  switch (kind) {
    case CoefKind::linear_noise: return "linear_noise";
    case CoefKind::ml: return "ml";
    case CoefKind::ml_standardized: return "ml_standardized";
    case CoefKind::scalings: return "scalings";
    case CoefKind::gamma: return "gamma";
    case CoefKind::reachability: return "reachability";
    case CoefKind::score: return "score";
  }
  return "unknown";
}

Dag::Dag(std::size_t d, std::vector<Edge> edges) : parents_(d), children_(d) {
  for (const Edge& e : edges) {
    if (e.from >= d || e.to >= d) {
      throw ArgumentError("edge (" + std::to_string(e.from) + ", " + std::to_string(e.to) +
                          ") references a vertex outside 0.." + std::to_string(d == 0 ? 0 : d - 1));
    }
    if (e.from == e.to) throw ArgumentError("self loop on vertex " + std::to_string(e.from));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);
  for (const Edge& e : edges_) {
    parents_[e.to].push_back(e.from);
    children_[e.from].push_back(e.to);
  }
  for (auto& p : parents_) std::sort(p.begin(), p.end());
  if (topological_order(*this).size() != d) throw CycleError("edge set contains a directed cycle");
}

bool Dag::has_edge(Vertex from, Vertex to) const {
  return std::binary_search(edges_.begin(), edges_.end(), Edge{from, to});
}

Path::Path(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 2) throw ArgumentError("a path needs at least one edge");
  std::vector<Vertex> sorted = vertices_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ArgumentError("path vertices must be distinct");
  }
}

std::vector<Vertex> topological_order(const Dag& dag) {
  const std::size_t d = dag.size();
  std::vector<std::size_t> indegree(d);
  for (Vertex v = 0; v < d; ++v) indegree[v] = dag.parents(v).size();

  std::priority_queue<Vertex, std::vector<Vertex>, std::greater<>> ready;
  for (Vertex v = 0; v < d; ++v) {
    if (indegree[v] == 0) ready.push(v);
  }
  std::vector<Vertex> order;
  order.reserve(d);
  while (!ready.empty()) {
    const Vertex v = ready.top();
    ready.pop();
    order.push_back(v);
    for (Vertex c : dag.children(v)) {
      if (--indegree[c] == 0) ready.push(c);
    }
  }
  // Fewer than d vertices means a cycle; the Dag constructor turns that into CycleError.
  return order;
}

CoefMatrix reachability(const Dag& dag) {
  const auto d = static_cast<Eigen::Index>(dag.size());
  CoefMatrix r{CoefKind::reachability, Matrix::Identity(d, d)};
  // Visiting in reverse topological order lets each vertex inherit its children's rows.
  const auto order = topological_order(dag);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto i = static_cast<Eigen::Index>(*it);
    for (Vertex c : dag.children(*it)) {
      r.values.row(i) = r.values.row(i).cwiseMax(r.values.row(static_cast<Eigen::Index>(c)));
    }
  }
  return r;
}

std::vector<Path> enumerate_paths(const Dag& dag, Vertex from, Vertex to) {
  if (from >= dag.size() || to >= dag.size()) throw ArgumentError("vertex out of range");
  if (from == to) throw ArgumentError("enumerate_paths needs distinct endpoints");

  std::vector<Path> paths;
  std::vector<Vertex> stack{from};
  std::function<void(Vertex)> walk = [&](Vertex v) {
    for (Vertex c : dag.children(v)) {
      stack.push_back(c);
      if (c == to) {
        paths.emplace_back(stack);
      } else {
        walk(c);
      }
      stack.pop_back();
    }
  };
  walk(from);
  return paths;
}

}  // namespace tailcausal
