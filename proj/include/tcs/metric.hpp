#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "tcs/errors.hpp"
#include "tcs/rational.hpp"

namespace tcs {

// A finite metric space on N+1 points. Index 0 is the distinguished basepoint.
template <typename S>
struct FiniteMetricSpace {
  std::vector<std::string> points;
  std::vector<std::vector<S>> dist;
  // Edge list of the graph the metric came from, when there is one (point
  // index pairs). Drives the --edges-only mode; empty for matrix inputs.
  std::vector<std::pair<int, int>> source_edges;

  int size() const { return static_cast<int>(points.size()); }
  const S& d(int i, int j) const { return dist[i][j]; }

  int index_of(const std::string& label) const {
    for (int i = 0; i < size(); ++i)
      if (points[i] == label) return i;
    throw UnknownPoint("point not in space: " + label);
  }
};

template <typename S>
struct WeightedGraph {
  std::vector<std::string> vertices;
  struct Edge {
    int u, v;
    S w;
  };
  std::vector<Edge> edges;

  int add_vertex(const std::string& label) {
    vertices.push_back(label);
    return static_cast<int>(vertices.size()) - 1;
  }
  void add_edge(int u, int v, const S& w) {
    if (u == v) throw ParameterOutOfRange("self-loop at vertex " + vertices[u]);
    if (!(w > 0)) throw ParameterOutOfRange("edge weight must be positive");
    edges.push_back({u, v, w});
  }
};

// A vertex order F: position -> point, with F(0) = basepoint.
struct VertexOrder {
  std::vector<int> to_point;  // position -> point index
  std::vector<int> to_pos;    // point index -> position

  VertexOrder() = default;
  explicit VertexOrder(std::vector<int> pos_to_point)
      : to_point(std::move(pos_to_point)) {
    rebuild_inverse();
  }
  static VertexOrder identity(int n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    return VertexOrder(std::move(p));
  }
  void rebuild_inverse() {
    const int n = static_cast<int>(to_point.size());
    to_pos.assign(n, -1);
    for (int pos = 0; pos < n; ++pos) {
      int pt = to_point[pos];
      if (pt < 0 || pt >= n || to_pos[pt] != -1)
        throw ParameterOutOfRange("vertex order is not a bijection");
      to_pos[pt] = pos;
    }
    if (n > 0 && to_point[0] != 0)
      throw ParameterOutOfRange("vertex order must map position 0 to the basepoint");
  }
  int size() const { return static_cast<int>(to_point.size()); }
  bool operator==(const VertexOrder& o) const { return to_point == o.to_point; }
};

struct MetricViolation {
  enum Kind { Diagonal, Symmetry, Positivity, Triangle } kind;
  int i = -1, j = -1, k = -1;
  std::string describe() const {
    switch (kind) {
      case Diagonal: return "nonzero diagonal at (" + std::to_string(i) + ")";
      case Symmetry:
        return "asymmetry at (" + std::to_string(i) + "," + std::to_string(j) + ")";
      case Positivity:
        return "nonpositive off-diagonal at (" + std::to_string(i) + "," +
               std::to_string(j) + ")";
      case Triangle:
        return "triangle violation (" + std::to_string(i) + "," +
               std::to_string(j) + "," + std::to_string(k) + ")";
    }
    return "";
  }
};

struct ValidationReport {
  std::vector<MetricViolation> violations;
  bool ok() const { return violations.empty(); }
};

template <typename S>
ValidationReport validate_metric(const FiniteMetricSpace<S>& m) {
  ValidationReport rep;
  const int n = m.size();
  for (int i = 0; i < n; ++i)
    if (!(m.dist[i][i] == 0))
      rep.violations.push_back({MetricViolation::Diagonal, i, i, -1});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (!(m.dist[i][j] == m.dist[j][i]))
        rep.violations.push_back({MetricViolation::Symmetry, i, j, -1});
      else if (!(m.dist[i][j] > 0))
        rep.violations.push_back({MetricViolation::Positivity, i, j, -1});
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (i != j && j != k && i != k) {
          S lhs = m.dist[i][k];
          S rhs = S(m.dist[i][j] + m.dist[j][k]);
          if (lhs > rhs)
            rep.violations.push_back({MetricViolation::Triangle, i, j, k});
        }
  return rep;
}

namespace detail {

// BFS fast path for uniformly weighted graphs.
template <typename S>
void bfs_row(const std::vector<std::vector<int>>& adj, int src, const S& w,
             std::vector<S>& row, std::vector<long>& hops) {
  std::fill(hops.begin(), hops.end(), -1L);
  std::queue<int> q;
  q.push(src);
  hops[src] = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj[u])
      if (hops[v] < 0) {
        hops[v] = hops[u] + 1;
        q.push(v);
      }
  }
  for (size_t i = 0; i < row.size(); ++i) {
    if (hops[i] < 0) throw DisconnectedGraph("graph is not connected");
    row[i] = S(w * S(hops[i]));
  }
}

// Dijkstra with exact comparisons; used above the Floyd-Warshall cutoff.
template <typename S>
void dijkstra_row(const std::vector<std::vector<std::pair<int, S>>>& adj,
                  int src, std::vector<S>& row) {
  const int n = static_cast<int>(adj.size());
  std::vector<bool> done(n, false), reached(n, false);
  row.assign(n, S(0));
  reached[src] = true;
  for (int it = 0; it < n; ++it) {
    int u = -1;
    for (int v = 0; v < n; ++v)
      if (reached[v] && !done[v] && (u < 0 || row[v] < row[u])) u = v;
    if (u < 0) throw DisconnectedGraph("graph is not connected");
    done[u] = true;
    for (const auto& [v, w] : adj[u]) {
      S cand = S(row[u] + w);
      if (!reached[v] || cand < row[v]) {
        reached[v] = true;
        row[v] = cand;
      }
    }
  }
}

}  // namespace detail

// Shortest-path metric of a connected weighted graph. The basepoint becomes
// index 0; the remaining vertices keep their input order.
template <typename S>
FiniteMetricSpace<S> geodesic_metric(const WeightedGraph<S>& g, int basepoint) {
  const int n = static_cast<int>(g.vertices.size());
  if (n == 0) throw ParameterOutOfRange("empty graph");
  if (basepoint < 0 || basepoint >= n)
    throw UnknownPoint("basepoint index out of range");

  // old index -> new index, basepoint first, others stable.
  std::vector<int> remap(n);
  remap[basepoint] = 0;
  int next = 1;
  for (int i = 0; i < n; ++i)
    if (i != basepoint) remap[i] = next++;

  FiniteMetricSpace<S> out;
  out.points.resize(n);
  for (int i = 0; i < n; ++i) out.points[remap[i]] = g.vertices[i];

  bool uniform = !g.edges.empty();
  for (const auto& e : g.edges)
    if (!(e.w == g.edges.front().w)) {
      uniform = false;
      break;
    }

  if (uniform) {
    std::vector<std::vector<int>> adj(n);
    for (const auto& e : g.edges) {
      adj[remap[e.u]].push_back(remap[e.v]);
      adj[remap[e.v]].push_back(remap[e.u]);
    }
    out.dist.assign(n, std::vector<S>(n, S(0)));
    std::vector<long> hops(n);
    for (int s = 0; s < n; ++s)
      detail::bfs_row(adj, s, g.edges.front().w, out.dist[s], hops);
  } else if (n > 2000) {
    // Dijkstra per source above the Floyd-Warshall cutoff.
    std::vector<std::vector<std::pair<int, S>>> adj(n);
    for (const auto& e : g.edges) {
      adj[remap[e.u]].push_back({remap[e.v], e.w});
      adj[remap[e.v]].push_back({remap[e.u], e.w});
    }
    out.dist.assign(n, std::vector<S>(n, S(0)));
    for (int s = 0; s < n; ++s) detail::dijkstra_row(adj, s, out.dist[s]);
  } else {
    // Floyd-Warshall; desk-scale sizes.
    const S none(-1);
    out.dist.assign(n, std::vector<S>(n, none));
    for (int i = 0; i < n; ++i) out.dist[i][i] = S(0);
    for (const auto& e : g.edges) {
      int u = remap[e.u], v = remap[e.v];
      if (out.dist[u][v] < 0 || e.w < out.dist[u][v]) {
        out.dist[u][v] = e.w;
        out.dist[v][u] = e.w;
      }
    }
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) {
        if (out.dist[i][k] < 0) continue;
        for (int j = 0; j < n; ++j) {
          if (out.dist[k][j] < 0) continue;
          S cand = S(out.dist[i][k] + out.dist[k][j]);
          if (out.dist[i][j] < 0 || cand < out.dist[i][j])
            out.dist[i][j] = cand;
        }
      }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (out.dist[i][j] < 0) throw DisconnectedGraph("graph is not connected");
  }

  for (const auto& e : g.edges)
    out.source_edges.emplace_back(remap[e.u], remap[e.v]);
  return out;
}

template <typename S>
FiniteMetricSpace<S> geodesic_metric(const WeightedGraph<S>& g,
                                     const std::string& basepoint) {
  for (int i = 0; i < static_cast<int>(g.vertices.size()); ++i)
    if (g.vertices[i] == basepoint) return geodesic_metric(g, i);
  throw UnknownPoint("basepoint not in graph: " + basepoint);
}

// Rebuilds the complete weighted graph of a metric space (used by the
// idempotence property and by metric repair-free validation flows).
template <typename S>
WeightedGraph<S> complete_graph(const FiniteMetricSpace<S>& m) {
  WeightedGraph<S> g;
  g.vertices = m.points;
  for (int i = 0; i < m.size(); ++i)
    for (int j = i + 1; j < m.size(); ++j) g.add_edge(i, j, m.dist[i][j]);
  return g;
}

}  // namespace tcs
