#include "tailcausal/error.hpp"
#include "tailcausal/rmlm_discovery.hpp"

#include <cmath>
#include <limits>

namespace tailcausal {
namespace {

struct ArcRef {
  std::size_t from;
  std::size_t to;
  double cost;
  std::size_t id;  // index into the original arc list
};

// Returns, for every non-root node, the id of its chosen incoming arc.
std::vector<std::size_t> edmonds(std::size_t n, const std::vector<ArcRef>& arcs, std::size_t root) {
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> best(n, none);  // position in arcs
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    const ArcRef& e = arcs[a];
    if (e.to == root || e.from == e.to) continue;
    if (best[e.to] == none || e.cost < arcs[best[e.to]].cost) best[e.to] = a;
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (v != root && best[v] == none) throw ArgumentError("some vertex cannot be reached from the root");
  }

  // find a cycle among the chosen arcs
  std::vector<std::size_t> cycle_id(n, none);
  std::vector<std::size_t> visit(n, none);
  std::size_t n_cycles = 0;
  for (std::size_t s = 0; s < n; ++s) {
    std::size_t v = s;
    while (v != root && visit[v] == none && cycle_id[v] == none) {
      visit[v] = s;
      v = arcs[best[v]].from;
    }
    if (v != root && visit[v] == s && cycle_id[v] == none) {
      for (std::size_t u = v; cycle_id[u] == none; u = arcs[best[u]].from) cycle_id[u] = n_cycles;
      ++n_cycles;
      break;
    }
  }

  std::vector<std::size_t> chosen(n, none);
  if (n_cycles == 0) {
    for (std::size_t v = 0; v < n; ++v) {
      if (v != root) chosen[v] = arcs[best[v]].id;
    }
    return chosen;
  }

  // contract the cycle into a single node
  std::vector<std::size_t> label(n, none);
  std::size_t m = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (cycle_id[v] == none) label[v] = m++;
  }
  const std::size_t c = m++;
  for (std::size_t v = 0; v < n; ++v) {
    if (cycle_id[v] != none) label[v] = c;
  }
  std::vector<ArcRef> contracted;
  std::vector<std::size_t> origin;  // position in arcs
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    const ArcRef& e = arcs[a];
    const std::size_t u = label[e.from];
    const std::size_t v = label[e.to];
    if (u == v) continue;
    double cost = e.cost;
    if (v == c) cost -= arcs[best[e.to]].cost;
    contracted.push_back({u, v, cost, contracted.size()});
    origin.push_back(a);
  }
  const std::vector<std::size_t> sub = edmonds(m, contracted, label[root]);

  for (std::size_t v = 0; v < n; ++v) {
    if (v != root) chosen[v] = arcs[best[v]].id;
  }
  for (std::size_t w = 0; w < m; ++w) {
    if (w == label[root]) continue;
    const ArcRef& e = arcs[origin[sub[w]]];
    chosen[e.to] = e.id;  // for the cycle node this breaks the cycle at e.to
  }
  return chosen;
}

}  // namespace

std::vector<Vertex> min_out_arborescence(const Matrix& cost, Vertex root) {
  const auto n = static_cast<std::size_t>(cost.rows());
  if (cost.cols() != cost.rows()) throw ArgumentError("cost matrix must be square");
  if (root >= n) throw ArgumentError("root out of range");
  std::vector<ArcRef> arcs;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      const double c = cost(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v));
      if (u != v && std::isfinite(c)) arcs.push_back({u, v, c, arcs.size()});
    }
  }
  const std::vector<std::size_t> chosen = edmonds(n, arcs, root);
  std::vector<Vertex> parent(n, root);
  for (std::size_t v = 0; v < n; ++v) {
    if (v != root) parent[v] = arcs[chosen[v]].from;
  }
  return parent;
}

Dag min_arborescence(const TreeScoreMatrix& w, Vertex root) {
  const std::size_t d = w.w.size();
  if (d < 2) throw ArgumentError("arborescence needs at least two vertices");
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (i != j && !std::isfinite(w.w(i, j))) throw ArgumentError("tree score matrix must be complete");
    }
  }
  // an in-tree edge v -> p costs w(p, v), which is the out-arborescence arc p -> v
  const std::vector<Vertex> parent = min_out_arborescence(w.w.values, root);
  std::vector<Edge> edges;
  for (Vertex v = 0; v < d; ++v) {
    if (v != root) edges.push_back({v, parent[v]});
  }
  return Dag(d, std::move(edges));
}

}  // namespace tailcausal
