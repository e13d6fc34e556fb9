#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tcs/basis.hpp"

namespace tcs {

// Greedy maximal eps-separated set, scanning points in index order. The
// result is eps-separated and eps-dense.
template <typename S>
std::vector<int> epsilon_net(const FiniteMetricSpace<S>& space, const S& eps,
                             const S& tol = S(0)) {
  if (!(eps > 0)) throw ParameterOutOfRange("eps must be positive");
  std::vector<int> net;
  for (int p = 0; p < space.size(); ++p) {
    bool separated = true;
    for (int q : net) {
      S gap = S(space.d(p, q) + tol);
      if (gap < eps) {
        separated = false;
        break;
      }
    }
    if (separated) net.push_back(p);
  }
  return net;
}

// Layered graph G_k over r^i-nets L_i, i = -k..k, with horizontal
// (overlapping-ball) and radial (ball-containment) edges, unit weights.
template <typename S>
struct HyperbolicApprox {
  FiniteMetricSpace<S> base;
  S lambda_scale, r;
  int k = 0;
  S tol;  // comparison tolerance; 0 in exact mode

  std::vector<std::vector<int>> layers;  // layers[i + k] = base point indices
  std::vector<S> radii;                  // r^i per layer slot

  // Flat vertex ids, layer-major from the bottom layer upward.
  std::vector<int> vertex_layer;  // slot index 0..2k
  std::vector<int> vertex_point;  // base point index
  std::vector<std::pair<int, int>> horizontal_edges;  // flat ids
  std::vector<std::pair<int, int>> radial_edges;      // (lower, upper)
  std::vector<std::vector<int>> radial_neighbors;     // per flat id, ids below

  FiniteMetricSpace<S> metric;  // geodesic metric of G_k

  int num_vertices() const { return static_cast<int>(vertex_layer.size()); }
  int flat_id(int slot, int index_in_layer) const {
    int id = 0;
    for (int s = 0; s < slot; ++s) id += static_cast<int>(layers[s].size());
    return id + index_in_layer;
  }

  bool ball_leq(const S& d, const S& radius) const {
    return !(d > S(radius + tol));
  }
  // B_M(x, R) as base point indices.
  std::vector<int> base_ball(int x, const S& radius) const {
    std::vector<int> out;
    for (int z = 0; z < base.size(); ++z)
      if (ball_leq(base.d(x, z), radius)) out.push_back(z);
    return out;
  }
};

template <typename S>
S layer_radius(const S& r, int i) {
  return num::int_pow(r, i);
}

template <typename S>
HyperbolicApprox<S> build_hyperbolic(const FiniteMetricSpace<S>& space,
                                     const S& lambda_scale, const S& r, int k,
                                     const S& tol = S(0)) {
  if (!(lambda_scale >= 2)) throw ParameterOutOfRange("lambda must be >= 2");
  if (!(r > 0) || !(r < S(1) / S(6)))
    throw ParameterOutOfRange("r must lie in (0, 1/6)");
  if (k < 1) throw ParameterOutOfRange("k must be >= 1");

  HyperbolicApprox<S> h;
  h.base = space;
  h.lambda_scale = lambda_scale;
  h.r = r;
  h.k = k;
  h.tol = tol;

  for (int i = -k; i <= k; ++i) {
    S eps = layer_radius(r, i);
    h.radii.push_back(eps);
    h.layers.push_back(epsilon_net(space, eps, tol));
  }
  if (h.layers.front().size() != 1)
    throw ParameterOutOfRange(
        "bottom layer is not a single point; k must exceed log_{1/r} diam(M)");

  for (int slot = 0; slot <= 2 * k; ++slot)
    for (int p : h.layers[slot]) {
      h.vertex_layer.push_back(slot);
      h.vertex_point.push_back(p);
    }
  h.radial_neighbors.assign(h.num_vertices(), {});

  WeightedGraph<S> g;
  for (int v = 0; v < h.num_vertices(); ++v) {
    int i = h.vertex_layer[v] - k;
    g.add_vertex("L" + std::to_string(i) + ":" +
                 space.points[h.vertex_point[v]]);
  }

  for (int slot = 0; slot <= 2 * k; ++slot) {
    S ball_r = S(h.lambda_scale * h.radii[slot]);
    const auto& layer = h.layers[slot];
    // Horizontal: balls B(x, lambda r^i) and B(y, lambda r^i) intersect.
    for (size_t a = 0; a < layer.size(); ++a)
      for (size_t b = a + 1; b < layer.size(); ++b) {
        bool inter = false;
        for (int z = 0; z < space.size() && !inter; ++z)
          inter = h.ball_leq(space.d(layer[a], z), ball_r) &&
                  h.ball_leq(space.d(layer[b], z), ball_r);
        if (inter) {
          int u = h.flat_id(slot, static_cast<int>(a));
          int v = h.flat_id(slot, static_cast<int>(b));
          h.horizontal_edges.emplace_back(u, v);
          g.add_edge(u, v, S(1));
        }
      }
    if (slot == 2 * k) continue;
    // Radial: B(y, lambda r^{i+1}) contained in B(x, lambda r^i).
    S upper_r = S(h.lambda_scale * h.radii[slot + 1]);
    const auto& upper = h.layers[slot + 1];
    for (size_t b = 0; b < upper.size(); ++b) {
      std::vector<int> inner = h.base_ball(upper[b], upper_r);
      for (size_t a = 0; a < layer.size(); ++a) {
        bool contained = true;
        for (int z : inner)
          if (!h.ball_leq(space.d(layer[a], z), ball_r)) {
            contained = false;
            break;
          }
        if (contained) {
          int u = h.flat_id(slot, static_cast<int>(a));
          int v = h.flat_id(slot + 1, static_cast<int>(b));
          h.radial_edges.emplace_back(u, v);
          h.radial_neighbors[v].push_back(u);
          g.add_edge(u, v, S(1));
        }
      }
    }
  }

  try {
    h.metric = geodesic_metric(g, 0);
  } catch (const DisconnectedGraph& e) {
    throw NotConnected(e.what());
  }
  return h;
}

// b_x = delta_x - (1/|N(x)|) sum_{y in N(x)} delta_y over the layer-monotone
// order (which the flat ids already realise).
template <typename S>
StochasticBasis<S> radial_basis(const HyperbolicApprox<S>& h) {
  const int n = h.num_vertices();
  StochasticBasis<S> b;
  b.order = VertexOrder::identity(n);
  b.rows.resize(n);
  b.rho.assign(n, S(1));
  for (int v = 1; v < n; ++v) {
    const auto& nb = h.radial_neighbors[v];
    if (nb.empty())
      throw EmptyRadialNeighbourhood("vertex " + h.metric.points[v] +
                                     " has no radial neighbour below");
    S w = S(S(1) / S(static_cast<int>(nb.size())));
    for (int u : nb) b.rows[v][u] = w;
  }
  return b;
}

template <typename S>
struct HomogeneityReport {
  S c_used;                    // max |B_L(x, le)| / |B_L(x, le(1-3r))|
  long d_est = 1;              // greedy doubling estimate
  double bound_via_doubling;   // 1 + 2 D lambda^{log2 D}
};

namespace detail {

template <typename S>
long doubling_estimate(const FiniteMetricSpace<S>& space) {
  const int n = space.size();
  std::set<S> radii;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (space.d(i, j) > 0) {
        radii.insert(space.d(i, j));
        radii.insert(S(space.d(i, j) * S(2)));
      }
  long best = 1;
  std::vector<int> ball, uncovered;
  for (int x = 0; x < n; ++x)
    for (const S& radius : radii) {
      ball.clear();
      for (int z = 0; z < n; ++z)
        if (!(space.d(x, z) > radius)) ball.push_back(z);
      if (static_cast<long>(ball.size()) <= best) continue;
      S half = S(radius / S(2));
      std::vector<char> covered(n, 0);
      long remaining = static_cast<long>(ball.size());
      long count = 0;
      while (remaining > 0) {
        int best_center = -1;
        long best_cover = -1;
        for (int c = 0; c < n; ++c) {
          long cover = 0;
          for (int z : ball)
            if (!covered[z] && !(space.d(c, z) > half)) ++cover;
          if (cover > best_cover) {
            best_cover = cover;
            best_center = c;
          }
        }
        if (best_cover <= 0)
          throw InternalError("doubling cover cannot make progress");
        for (int z : ball)
          if (!covered[z] && !(space.d(best_center, z) > half)) {
            covered[z] = 1;
            --remaining;
          }
        ++count;
      }
      best = std::max(best, count);
    }
  return best;
}

}  // namespace detail

// C is measured on the constructed layers only (a lower estimate of the true
// homogeneity constant; exactly what the distortion bound consumes).
template <typename S>
HomogeneityReport<S> homogeneity_constant(const HyperbolicApprox<S>& h) {
  HomogeneityReport<S> rep;
  rep.c_used = S(1);
  S three_r = S(S(3) * h.r);
  for (size_t slot = 0; slot < h.layers.size(); ++slot) {
    S big = S(h.lambda_scale * h.radii[slot]);
    S small = S(big * S(S(1) - three_r));
    for (int x = 0; x < h.base.size(); ++x) {
      long num = 0, den = 0;
      for (int z : h.layers[slot]) {
        if (h.ball_leq(h.base.d(x, z), big)) ++num;
        if (h.ball_leq(h.base.d(x, z), small)) ++den;
      }
      if (den < 1)
        throw InternalError("net is not dense enough to populate the ball");
      S ratio = S(S(num) / S(den));
      if (ratio > rep.c_used) rep.c_used = ratio;
    }
  }
  rep.d_est = detail::doubling_estimate(h.base);
  double d = static_cast<double>(rep.d_est);
  double lam = 0.0;
  if constexpr (std::is_same_v<S, double>)
    lam = h.lambda_scale;
  else
    lam = mpq_class(h.lambda_scale).get_d();
  rep.bound_via_doubling = 1.0 + 2.0 * d * std::pow(lam, std::log2(d));
  return rep;
}

template <typename S>
struct HyperReport {
  S distortion;
  S c_used;
  S bound;  // 1 + 2 c_used
  long d_est = 1;
  double bound_via_doubling = 0.0;
  std::string witness_x, witness_y;
  bool pass = false;         // distortion <= 1 + 2 c_used
  bool edges_ok = false;     // per-edge coordinate sums within the split bounds
  bool induced_measure_ok = false;    // clique support and total-variation bound
  bool ball_identity_ok = false;   // N(x) = B_{L_i}(x, lambda r^i (1-r))
  bool doubling_ok = false;  // c_used <= D lambda^{log2 D} (float compare)
};

namespace detail {

template <typename S>
bool check_ball_identity(const HyperbolicApprox<S>& h) {
  for (int v = 0; v < h.num_vertices(); ++v) {
    int slot = h.vertex_layer[v];
    if (slot == 0) continue;
    S radius = S(S(h.lambda_scale * h.radii[slot - 1]) * S(S(1) - h.r));
    std::set<int> ball;
    for (size_t a = 0; a < h.layers[slot - 1].size(); ++a)
      if (h.ball_leq(h.base.d(h.layers[slot - 1][a], h.vertex_point[v]), radius))
        ball.insert(h.flat_id(slot - 1, static_cast<int>(a)));
    std::set<int> nb(h.radial_neighbors[v].begin(), h.radial_neighbors[v].end());
    if (ball != nb) return false;
  }
  return true;
}

template <typename S>
bool check_induced_measures(const HyperbolicApprox<S>& h, const S& c_used) {
  std::set<std::pair<int, int>> horizontal(h.horizontal_edges.begin(),
                                           h.horizontal_edges.end());
  for (const auto& [a, b] : h.horizontal_edges) {
    int slot = h.vertex_layer[a];
    if (slot == 0) continue;
    int x = std::max(a, b), y = std::min(a, b);
    std::map<int, S> mu;
    S wx = S(S(1) / S(static_cast<int>(h.radial_neighbors[x].size())));
    S wy = S(S(1) / S(static_cast<int>(h.radial_neighbors[y].size())));
    for (int u : h.radial_neighbors[x]) mu[u] += wx;
    for (int u : h.radial_neighbors[y]) mu[u] -= wy;
    std::vector<int> support;
    S tv(0);
    for (const auto& [u, m] : mu) {
      if (m == 0) continue;
      support.push_back(u);
      tv += num::abs_val(m);
    }
    for (size_t i = 0; i < support.size(); ++i)
      for (size_t j = i + 1; j < support.size(); ++j)
        if (!horizontal.count({support[i], support[j]}) &&
            !horizontal.count({support[j], support[i]}))
          return false;
    S limit = S(S(2) - S(2) / c_used);
    if (tv > limit) return false;
  }
  return true;
}

template <typename S>
bool check_edge_sums(const HyperbolicApprox<S>& h,
                     const StochasticBasis<S>& basis, const S& c_used) {
  std::vector<S> norms = basis_norms(basis, h.metric);
  S radial_limit = S(S(1) + S(2) * c_used);
  S horizontal_limit = S(S(2) * c_used);
  auto sum_for = [&](int px, int py) {
    return pair_coordinate_sum(basis, norms, std::max(px, py),
                               std::min(px, py));
  };
  for (const auto& [u, v] : h.horizontal_edges)
    if (sum_for(u, v) > horizontal_limit) return false;
  for (const auto& [u, v] : h.radial_edges)
    if (sum_for(u, v) > radial_limit) return false;
  return true;
}

}  // namespace detail

template <typename S>
HyperReport<S> verify_hyperbolic_bound(const HyperbolicApprox<S>& h,
                                       unsigned threads = 0) {
  StochasticBasis<S> basis = radial_basis(h);
  HomogeneityReport<S> hom = homogeneity_constant(h);

  HyperReport<S> rep;
  rep.c_used = hom.c_used;
  rep.d_est = hom.d_est;
  rep.bound_via_doubling = hom.bound_via_doubling;
  rep.bound = S(S(1) + S(2) * hom.c_used);

  DistortionResult<S> res = basis_distortion(basis, h.metric, false, threads);
  rep.distortion = res.value;
  rep.witness_x = h.metric.points[res.x];
  rep.witness_y = h.metric.points[res.y];
  rep.pass = !(rep.distortion > rep.bound);
  rep.edges_ok = detail::check_edge_sums(h, basis, hom.c_used);
  rep.induced_measure_ok = detail::check_induced_measures(h, hom.c_used);
  rep.ball_identity_ok = detail::check_ball_identity(h);

  double c = 0.0;
  if constexpr (std::is_same_v<S, double>)
    c = rep.c_used;
  else
    c = mpq_class(rep.c_used).get_d();
  // (bound_via_doubling - 1) / 2 == D lambda^{log2 D}
  rep.doubling_ok = c <= (rep.bound_via_doubling - 1.0) / 2.0 + 1e-9;
  return rep;
}

// lp metrics over exact coordinates: builds the ambient sample for the CLI's
// l1 / linf modes.
template <typename S>
FiniteMetricSpace<S> lp_space(const std::vector<std::vector<S>>& coords,
                              const std::vector<std::string>& labels,
                              bool linf) {
  const int n = static_cast<int>(coords.size());
  if (n == 0) throw ParameterOutOfRange("empty point set");
  FiniteMetricSpace<S> m;
  m.points = labels;
  m.dist.assign(n, std::vector<S>(n, S(0)));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (coords[i].size() != coords[j].size())
        throw DimensionMismatch("coordinate dimensions disagree");
      S acc(0);
      for (size_t c = 0; c < coords[i].size(); ++c) {
        S diff = num::abs_val(S(coords[i][c] - coords[j][c]));
        if (linf)
          acc = std::max(acc, diff);
        else
          acc += diff;
      }
      m.dist[i][j] = acc;
      m.dist[j][i] = acc;
    }
  return m;
}

}  // namespace tcs
