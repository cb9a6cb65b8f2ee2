#include "oracles.hpp"

#include "tailcausal/dag_io.hpp"
#include "tailcausal/error.hpp"
#include "tailcausal/graph.hpp"

#include <doctest.h>

using namespace tailcausal;

namespace {

Dag diamond() { return Dag(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}); }

}  // namespace

TEST_CASE("topological order examples") {
  CHECK(topological_order(diamond()) == std::vector<Vertex>{0, 1, 2, 3});
  CHECK(topological_order(Dag(1)) == std::vector<Vertex>{0});
  CHECK(topological_order(Dag(3, {{2, 1}, {1, 0}})) == std::vector<Vertex>{2, 1, 0});
}

TEST_CASE("cycles and bad edges are rejected") {
  CHECK_THROWS_AS(Dag(3, {{0, 1}, {1, 2}, {2, 0}}), CycleError);
  CHECK_THROWS_AS(Dag(2, {{0, 0}}), ArgumentError);
  CHECK_THROWS_AS(Dag(2, {{0, 2}}), ArgumentError);
}

TEST_CASE("reachability examples") {
  const CoefMatrix r = reachability(diamond());
  CHECK(r.kind == CoefKind::reachability);
  CHECK(r(0, 3) == 1.0);
  CHECK(r(1, 2) == 0.0);
  for (std::size_t i = 0; i < 4; ++i) CHECK(r(i, i) == 1.0);
  CHECK(reachability(Dag(5)).values == Matrix::Identity(5, 5));

  // Seine without Nemours: Paris, Meaux, Melun, Sens
  const CoefMatrix s = reachability(Dag(4, {{1, 0}, {2, 0}, {3, 2}}));
  Matrix table = Matrix::Zero(4, 4);
  table(1, 0) = table(2, 0) = table(3, 0) = table(3, 2) = 1.0;
  CHECK((s.values - Matrix::Identity(4, 4)) == table);
}

TEST_CASE("path enumeration examples") {
  const auto p = enumerate_paths(diamond(), 0, 3);
  REQUIRE(p.size() == 2);
  CHECK(p[0].vertices() == std::vector<Vertex>{0, 1, 3});
  CHECK(p[1].vertices() == std::vector<Vertex>{0, 2, 3});
  CHECK(enumerate_paths(diamond(), 1, 2).empty());
  const auto chain = enumerate_paths(Dag(3, {{0, 1}, {1, 2}}), 0, 2);
  REQUIRE(chain.size() == 1);
  CHECK(chain[0].length() == 2);
  CHECK_THROWS_AS(enumerate_paths(diamond(), 2, 2), ArgumentError);
}

TEST_CASE("reachability equals boolean power closure on random DAGs") {
  std::mt19937_64 g(11);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t d = 1 + g() % 8;
    const Dag dag = oracle::random_dag(g, d, 0.4);
    const CoefMatrix r = reachability(dag);
    CHECK(r.values == oracle::closure_by_powers(dag));
    for (Vertex i = 0; i < d; ++i) {
      for (Vertex j = 0; j < d; ++j) {
        if (i == j) continue;
        const bool has_path = !enumerate_paths(dag, i, j).empty();
        CHECK(has_path == (r(i, j) == 1.0));
        CHECK(enumerate_paths(dag, i, j).size() == oracle::all_paths(dag, i, j).size());
      }
    }
  }
}

TEST_CASE("topological order is valid and fixed under relabeling by itself") {
  std::mt19937_64 g(12);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t d = 1 + g() % 8;
    const Dag dag = oracle::random_dag(g, d, 0.4);
    const auto order = topological_order(dag);
    std::vector<std::size_t> pos(d);
    for (std::size_t t = 0; t < d; ++t) pos[order[t]] = t;
    for (const Edge& e : dag.edges()) CHECK(pos[e.from] < pos[e.to]);

    std::vector<Edge> relabeled;
    for (const Edge& e : dag.edges()) relabeled.push_back({pos[e.from], pos[e.to]});
    const auto again = topological_order(Dag(d, relabeled));
    for (std::size_t t = 0; t < d; ++t) CHECK(again[t] == t);
  }
}

TEST_CASE("path invariants") {
  CHECK_THROWS_AS(Path({1}), ArgumentError);
  CHECK_THROWS_AS(Path({1, 2, 1}), ArgumentError);
  const Path p({0, 2, 3});
  CHECK(p.source() == 0);
  CHECK(p.target() == 3);
}

TEST_CASE("DAG text format") {
  const DagFile f = parse_dag_text("# diamond\n1 -> 2 0.5\n1 -> 3 0.25\n\n2 -> 4 2  # trailing\n3 -> 4 0.5\n");
  CHECK(f.dag == diamond());
  CHECK(f.fully_weighted());
  CHECK(f.weights.at(Edge{1, 3}) == 2.0);

  const DagFile g = parse_dag_text(format_dag_text(f.dag, f.weights));
  CHECK(g.dag == f.dag);
  CHECK(g.weights == f.weights);

  CHECK(parse_dag_text("nodes 5\n1 -> 2\n").dag.size() == 5);
  CHECK_FALSE(parse_dag_text("1 -> 2\n2 -> 3 1\n").fully_weighted());

  try {
    parse_dag_text("1 -> 2\n2 => 3\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_dag_text("1 -> 2\n2 -> 1\n"), CycleError);
  CHECK_THROWS_AS(parse_dag_text("0 -> 1\n"), ParseError);
}
