#pragma once

// Shared fixtures: the five-point example space (complete graph on {1,2,3,4}
// plus a basepoint adjacent to 1 and 2, unit weights) and its half-split
// basis, plus small path/star spaces.

#include "tcs/basis.hpp"
#include "tcs/metric.hpp"

namespace tcs::test {

inline FiniteMetricSpace<Rational> five_point_space() {
  WeightedGraph<Rational> g;
  for (int i = 0; i < 5; ++i) g.add_vertex(std::to_string(i));
  g.add_edge(0, 1, 1);
  g.add_edge(0, 2, 1);
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) g.add_edge(i, j, 1);
  return geodesic_metric(g, 0);
}

// b1 = d1, b2 = d2, b3 = d3 - (d1+d2)/2, b4 = d4 - (d1+d2)/2.
inline StochasticBasis<Rational> five_point_basis() {
  StochasticBasis<Rational> b;
  b.order = VertexOrder::identity(5);
  b.rows.resize(5);
  b.rho.assign(5, Rational(1));
  b.rows[1][0] = 1;
  b.rows[2][0] = 1;
  b.rows[3][1] = make_ratio(1, 2);
  b.rows[3][2] = make_ratio(1, 2);
  b.rows[4][1] = make_ratio(1, 2);
  b.rows[4][2] = make_ratio(1, 2);
  b.validate();
  return b;
}

inline FiniteMetricSpace<Rational> path_space(const std::vector<Rational>& w) {
  WeightedGraph<Rational> g;
  for (size_t i = 0; i <= w.size(); ++i) g.add_vertex(std::to_string(i));
  for (size_t i = 0; i < w.size(); ++i)
    g.add_edge(static_cast<int>(i), static_cast<int>(i + 1), w[i]);
  return geodesic_metric(g, 0);
}

inline FiniteMetricSpace<Rational> star_space(int leaves) {
  WeightedGraph<Rational> g;
  g.add_vertex("0");
  for (int i = 1; i <= leaves; ++i) {
    g.add_vertex(std::to_string(i));
    g.add_edge(0, i, 1);
  }
  return geodesic_metric(g, 0);
}

}  // namespace tcs::test
