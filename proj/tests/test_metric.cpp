#include <doctest.h>

#include "oracles.hpp"
#include "tcs/metric.hpp"

using namespace tcs;

namespace {

// Complete graph on {1,2,3,4} with unit weights plus 0 adjacent to 1 and 2.
WeightedGraph<Rational> five_point_graph() {
  WeightedGraph<Rational> g;
  for (int i = 0; i < 5; ++i) g.add_vertex(std::to_string(i));
  g.add_edge(0, 1, 1);
  g.add_edge(0, 2, 1);
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) g.add_edge(i, j, 1);
  return g;
}

}  // namespace

TEST_SUITE("metric") {

TEST_CASE("path graph geodesics") {
  WeightedGraph<Rational> g;
  g.add_vertex("0");
  g.add_vertex("1");
  g.add_vertex("2");
  g.add_edge(0, 1, 1);
  g.add_edge(1, 2, 1);
  auto m = geodesic_metric(g, 0);
  CHECK(m.d(0, 2) == 2);
  CHECK(m.d(0, 1) == 1);
  CHECK(validate_metric(m).ok());
}

TEST_CASE("five point example graph") {
  auto m = geodesic_metric(five_point_graph(), 0);
  CHECK(m.d(0, 3) == 2);
  CHECK(m.d(3, 4) == 1);
  CHECK(m.d(0, 1) == 1);
  // full matrix against the brute-force path oracle
  auto g = five_point_graph();
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      CHECK(m.d(i, j) == (i == j ? Rational(0) : test::brute_force_shortest(g, i, j)));
}

TEST_CASE("disconnected graph is rejected") {
  WeightedGraph<Rational> g;
  g.add_vertex("a");
  g.add_vertex("b");
  g.add_vertex("c");
  g.add_edge(0, 1, 1);
  CHECK_THROWS_AS(geodesic_metric(g, 0), DisconnectedGraph);
}

TEST_CASE("basepoint is rotated to index 0") {
  WeightedGraph<Rational> g;
  g.add_vertex("a");
  g.add_vertex("b");
  g.add_vertex("c");
  g.add_edge(0, 1, 2);
  g.add_edge(1, 2, 3);
  auto m = geodesic_metric(g, std::string("b"));
  CHECK(m.points[0] == "b");
  CHECK(m.points[1] == "a");
  CHECK(m.points[2] == "c");
  CHECK(m.d(0, 1) == 2);
  CHECK(m.d(0, 2) == 3);
  CHECK(m.d(1, 2) == 5);
}

TEST_CASE("validate_metric reports each axiom") {
  FiniteMetricSpace<Rational> m;
  m.points = {"a", "b", "c"};
  m.dist = {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
  CHECK(validate_metric(m).ok());

  SUBCASE("triangle violation") {
    m.dist[0][2] = 5;
    m.dist[2][0] = 5;
    auto rep = validate_metric(m);
    REQUIRE(!rep.ok());
    bool found = false;
    for (const auto& v : rep.violations)
      found |= v.kind == MetricViolation::Triangle;
    CHECK(found);
  }
  SUBCASE("asymmetry") {
    m.dist[0][1] = 2;
    auto rep = validate_metric(m);
    REQUIRE(!rep.ok());
    CHECK(rep.violations.front().kind == MetricViolation::Symmetry);
  }
  SUBCASE("nonzero diagonal") {
    m.dist[1][1] = 1;
    auto rep = validate_metric(m);
    REQUIRE(!rep.ok());
    CHECK(rep.violations.front().kind == MetricViolation::Diagonal);
  }
}

TEST_CASE("geodesic metrics validate and are idempotent") {
  test::Rng rng(101);
  for (int round = 0; round < 20; ++round) {
    int n = 3 + static_cast<int>(rng.uniform(0, 4));
    auto m = test::random_metric(rng, n);
    CHECK(validate_metric(m).ok());
    auto again = geodesic_metric(complete_graph(m), 0);
    CHECK(again.dist == m.dist);
  }
}

TEST_CASE("uniform-weight BFS path agrees with Floyd-Warshall") {
  test::Rng rng(77);
  for (int round = 0; round < 10; ++round) {
    int n = 4 + static_cast<int>(rng.uniform(0, 3));
    WeightedGraph<Rational> g;
    for (int i = 0; i < n; ++i) g.add_vertex(std::to_string(i));
    for (int i = 1; i < n; ++i) g.add_edge(i, rng.uniform(0, i - 1), Rational(2));
    for (int e = 0; e < n; ++e) {
      int u = rng.uniform(0, n - 1), v = rng.uniform(0, n - 1);
      if (u != v) g.add_edge(u, v, Rational(2));
    }
    auto bfs = geodesic_metric(g, 0);  // uniform weights: BFS fast path
    WeightedGraph<Rational> mixed = g;
    mixed.add_vertex("extra");
    mixed.add_edge(0, n, Rational(1));  // non-uniform: Floyd-Warshall
    auto fw = geodesic_metric(mixed, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) CHECK(bfs.d(i, j) == fw.d(i, j));
  }
}

}  // TEST_SUITE
