#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tcs/basis.hpp"
#include "tcs/rational.hpp"

namespace tcs {

inline int laakso_guard_default() { return 4; }

// The k-th Laakso graph with unit weights and construction metadata. Vertex
// ids are assigned generation-monotonically: ids 0..5 are the template graph
// (0 and 5 its degree-1 vertices, listed in BFS order from 0), and each later
// generation appends four vertices per replaced edge, in edge order.
struct LaaksoGraph {
  // Roles of the four vertices inserted into an oriented edge (u, v), u < v,
  // together with their distances to u and v inside their own generation.
  enum Role { JunctionNearU = 0, Top = 1, Bottom = 2, JunctionNearV = 3 };
  static constexpr std::array<std::pair<int, int>, 4> role_dists = {
      std::pair<int, int>{1, 3}, {2, 2}, {2, 2}, {3, 1}};

  int k = 0;
  std::vector<std::string> labels;
  std::vector<int> generation;           // g(u), 1..k
  std::vector<Role> role;                // meaningful for generation >= 2
  std::vector<std::array<int, 2>> replaced_edge;  // e(x) = {u, v}, u < v
  // edges_by_generation[j] = E(L_j) for j = 0..k as vertex id pairs (u < v);
  // edge_parent[j][e] indexes the replaced edge in generation j-1 (j >= 1).
  std::vector<std::vector<std::array<int, 2>>> edges_by_generation;
  std::vector<std::vector<int>> edge_parent;

  int num_vertices() const { return static_cast<int>(labels.size()); }
  const std::vector<std::array<int, 2>>& final_edges() const {
    return edges_by_generation[k];
  }
};

// Builds L_k together with its geodesic metric (unit weights). Guard bounds k
// (L_4 has 1038 vertices; full-pair work beyond that is opt-in).
std::pair<LaaksoGraph, FiniteMetricSpace<Rational>> build_laakso(
    int k, int guard = laakso_guard_default());

// Generation-monotone order; with the construction's id assignment this is
// the identity, with position 0 a degree-1 vertex of L_1.
VertexOrder laakso_order(const LaaksoGraph& g);

// The explicit stochastic basis: b_n = delta_n for n <= 5 and the two-point
// split over the endpoints of e(n) with weights d_{g(n)}(n, e(n)^-+)/4
// otherwise. Throws OrderViolation if the order is not generation-monotone.
StochasticBasis<Rational> laakso_basis(const LaaksoGraph& g,
                                       const VertexOrder& order);

// Descent chain a_k = {x, y} |> a_{k-1} |> ... |> a_1 reconstructed from the
// replaced-edge metadata, with the orientation (n_i^+, n_i^-) chosen by
// proximity where that is unambiguous.
struct DescentChain {
  std::vector<std::array<int, 2>> sets;      // a_i as {min, max}, i = 1..k
  std::vector<std::array<int, 2>> oriented;  // {n_i^+, n_i^-}; -1 if ambiguous
  bool orientation_ambiguous = false;
};

DescentChain reconstruct_descent_chain(const LaaksoGraph& g, int x, int y);

struct LaaksoReport {
  int k = 0;
  int n_vertices = 0;
  bool edges_only = false;
  Rational distortion;
  Rational bound;        // 8k
  Rational lower_bound;  // (3k-5)/8, cited
  std::string witness_x, witness_y;
  bool upper_ok = false;  // distortion <= 8k
  bool lower_ok = false;  // distortion >= max(1, (3k-5)/8)
};

LaaksoReport verify_laakso_bound(int k, bool full_pairs = true,
                                 unsigned threads = 0,
                                 int guard = laakso_guard_default());

}  // namespace tcs
