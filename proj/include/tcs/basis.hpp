#pragma once

#include <map>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include "tcs/transport.hpp"

namespace tcs {

// A compatible tree, encoded by its parent map: parent[n] < n for n >= 1 in
// the positions of some vertex order, parent[0] = -1.
struct CompatibleTree {
  std::vector<int> parent;

  int size() const { return static_cast<int>(parent.size()); }
  bool operator==(const CompatibleTree& o) const { return parent == o.parent; }
  void validate() const {
    if (parent.empty() || parent[0] != -1)
      throw ParameterOutOfRange("tree root must be position 0");
    for (int n = 1; n < size(); ++n)
      if (parent[n] < 0 || parent[n] >= n)
        throw ParameterOutOfRange("tree parent must precede the vertex");
  }
};

// Stochastic basis b_n = rho_n (delta_{F(n)} - sum_{i<n} lambda_{n,i}
// delta_{F(i)}) with nonnegative rows summing to one. Rows are sparse maps
// keyed by position i < n.
template <typename S>
struct StochasticBasis {
  VertexOrder order;
  std::vector<std::map<int, S>> rows;  // rows[n] for n = 1..N; rows[0] unused
  std::vector<S> rho;                  // rho[n] != 0; rho[0] unused

  int count() const { return static_cast<int>(rows.size()) - 1; }  // N

  S lambda(int n, int i) const {
    auto it = rows[n].find(i);
    return it == rows[n].end() ? S(0) : it->second;
  }

  bool normalised() const {
    for (int n = 1; n <= count(); ++n)
      if (!(rho[n] == 1)) return false;
    return true;
  }

  StochasticBasis normalised_copy() const {
    StochasticBasis b = *this;
    for (int n = 1; n <= b.count(); ++n) b.rho[n] = S(1);
    return b;
  }

  void validate() const {
    const int n_count = count();
    if (order.size() != n_count + 1)
      throw DimensionMismatch("basis order and rows disagree");
    if (static_cast<int>(rho.size()) != n_count + 1)
      throw DimensionMismatch("rho size mismatch");
    for (int n = 1; n <= n_count; ++n) {
      if (rho[n] == 0) throw ParameterOutOfRange("rho must be nonzero");
      S sum(0);
      for (const auto& [i, v] : rows[n]) {
        if (i < 0 || i >= n)
          throw ParameterOutOfRange("lambda index out of range in row " +
                                    std::to_string(n));
        if (v < 0) throw ParameterOutOfRange("lambda must be nonnegative");
        sum += v;
      }
      if (!(sum == 1))
        throw ParameterOutOfRange("row " + std::to_string(n) +
                                  " does not sum to 1");
    }
  }

  // All mass to the basepoint: b_n = delta_n (as a transportation problem,
  // delta_n - delta_0).
  static StochasticBasis delta(int n_points) {
    StochasticBasis b;
    b.order = VertexOrder::identity(n_points);
    b.rows.resize(n_points);
    b.rho.assign(n_points, S(1));
    for (int n = 1; n < n_points; ++n) b.rows[n][0] = S(1);
    return b;
  }

  // Molecular basis along the edges of a compatible tree.
  static StochasticBasis molecular(VertexOrder order, const CompatibleTree& t) {
    StochasticBasis b;
    const int n_points = order.size();
    if (t.size() != n_points) throw DimensionMismatch("tree size mismatch");
    b.order = std::move(order);
    b.rows.resize(n_points);
    b.rho.assign(n_points, S(1));
    for (int n = 1; n < n_points; ++n) b.rows[n][t.parent[n]] = S(1);
    return b;
  }

  // b_n as a transportation problem (point indices).
  TransportProblem<S> vector(int n) const {
    TransportProblem<S> mu;
    mu.mass[order.to_point[n]] += rho[n];
    for (const auto& [i, v] : rows[n])
      mu.mass[order.to_point[i]] -= S(rho[n] * v);
    mu.canonicalize();
    return mu;
  }
};

// Dual coordinates b*_n(mu) for n = 1..N.
template <typename S>
struct DualCoefficients {
  std::vector<S> coeffs;  // index 0 unused
  int count() const { return static_cast<int>(coeffs.size()) - 1; }
};

namespace detail {

template <typename S>
std::vector<S> positions_of(const StochasticBasis<S>& basis,
                            const TransportProblem<S>& mu) {
  const int n_points = basis.order.size();
  std::vector<S> v(n_points, S(0));
  for (const auto& [pt, m] : mu.mass) {
    if (pt < 0 || pt >= n_points)
      throw DimensionMismatch("measure escapes the basis order");
    v[basis.order.to_pos[pt]] = m;
  }
  return v;
}

}  // namespace detail

// The back-substitution alpha(n) = mu(n) + sum_{m>n} alpha(m) lambda_{m,n},
// extended down to position 0. Requires a normalised basis; mu is an
// arbitrary function on positions (not necessarily zero-sum).
template <typename S>
std::vector<S> alpha_extended(const StochasticBasis<S>& basis,
                              std::vector<S> mu_by_pos) {
  const int n_count = basis.count();
  if (static_cast<int>(mu_by_pos.size()) != n_count + 1)
    throw DimensionMismatch("alpha input size mismatch");
  std::vector<S>& alpha = mu_by_pos;
  for (int m = n_count; m >= 1; --m) {
    if (alpha[m] == 0) continue;
    for (const auto& [i, lam] : basis.rows[m]) alpha[i] += S(lam * alpha[m]);
  }
  return alpha;
}

template <typename S>
DualCoefficients<S> dual_coefficients(const StochasticBasis<S>& basis,
                                      const TransportProblem<S>& mu) {
  std::vector<S> alpha;
  if (basis.normalised()) {
    alpha = alpha_extended(basis, detail::positions_of(basis, mu));
  } else {
    StochasticBasis<S> norm = basis.normalised_copy();
    alpha = alpha_extended(norm, detail::positions_of(norm, mu));
    for (int n = 1; n <= basis.count(); ++n) alpha[n] = S(alpha[n] / basis.rho[n]);
  }
  return DualCoefficients<S>{std::move(alpha)};
}

// Matrix-series route: b*(mu) = sum_{j=0..N} T^j delta*(mu) where T is the
// strictly upper triangular matrix T[i][n] = lambda_{n,i}. Kept separate from
// the triangular solve as an algebraic cross-check.
template <typename S>
DualCoefficients<S> dual_coefficients_series(const StochasticBasis<S>& basis,
                                             const TransportProblem<S>& mu) {
  if (!basis.normalised())
    throw ParameterOutOfRange("series route requires a normalised basis");
  const int n_count = basis.count();
  std::vector<S> v = detail::positions_of(basis, mu);
  std::vector<S> acc = v;
  for (int j = 1; j <= n_count; ++j) {
    std::vector<S> w(n_count + 1, S(0));
    for (int m = 1; m <= n_count; ++m) {
      if (v[m] == 0) continue;
      for (const auto& [i, lam] : basis.rows[m]) w[i] += S(lam * v[m]);
    }
    v = std::move(w);
    for (int i = 0; i <= n_count; ++i) acc[i] += v[i];
  }
  acc[0] = S(0);
  return DualCoefficients<S>{std::move(acc)};
}

// sum_n coeffs(n) b_n as a transportation problem.
template <typename S>
TransportProblem<S> reconstruct(const StochasticBasis<S>& basis,
                                const DualCoefficients<S>& coeffs) {
  if (coeffs.count() != basis.count())
    throw DimensionMismatch("coefficient count mismatch");
  TransportProblem<S> mu;
  for (int n = 1; n <= basis.count(); ++n) {
    const S& c = coeffs.coeffs[n];
    if (c == 0) continue;
    S cn = S(c * basis.rho[n]);
    mu.mass[basis.order.to_point[n]] += cn;
    for (const auto& [i, lam] : basis.rows[n])
      mu.mass[basis.order.to_point[i]] -= S(cn * lam);
  }
  mu.canonicalize();
  return mu;
}

// ||b_n|| = |rho_n| sum_i lambda_{n,i} d(F(n), F(i)), n = 1..N.
template <typename S>
std::vector<S> basis_norms(const StochasticBasis<S>& basis,
                           const FiniteMetricSpace<S>& space) {
  const int n_count = basis.count();
  if (space.size() != n_count + 1)
    throw DimensionMismatch("basis does not match the space");
  std::vector<S> norms(n_count + 1, S(0));
  for (int n = 1; n <= n_count; ++n) {
    S sum(0);
    for (const auto& [i, lam] : basis.rows[n])
      sum += S(lam * space.d(basis.order.to_point[n], basis.order.to_point[i]));
    norms[n] = S(num::abs_val(basis.rho[n]) * sum);
  }
  return norms;
}

namespace detail {

// sum_n |b*_n(delta_x - delta_y)| ||b_n|| over positions px != py, for a
// normalised basis with precomputed norms.
template <typename S>
S pair_coordinate_sum(const StochasticBasis<S>& basis,
                      const std::vector<S>& norms, int px, int py) {
  const int n_count = basis.count();
  std::vector<S> mu(n_count + 1, S(0));
  mu[px] += S(1);
  mu[py] -= S(1);
  std::vector<S> alpha = alpha_extended(basis, std::move(mu));
  S sum(0);
  for (int n = 1; n <= n_count; ++n) {
    if (alpha[n] == 0) continue;
    sum += S(num::abs_val(alpha[n]) * norms[n]);
  }
  return sum;
}

}  // namespace detail

// (1/d(x,y)) sum_n |b*_n(delta_x - delta_y)| ||b_n|| for points x != y.
template <typename S>
S pair_distortion(const StochasticBasis<S>& basis,
                  const FiniteMetricSpace<S>& space, int x, int y) {
  if (x == y) throw SamePoint("pair distortion needs two distinct points");
  StochasticBasis<S> norm =
      basis.normalised() ? basis : basis.normalised_copy();
  std::vector<S> norms = basis_norms(norm, space);
  S sum = detail::pair_coordinate_sum(norm, norms, basis.order.to_pos[x],
                                      basis.order.to_pos[y]);
  return S(sum / space.d(x, y));
}

template <typename S>
struct DistortionResult {
  S value;
  int x = -1, y = -1;  // witness pair (point indices)
};

// max over unordered pairs of M (all pairs, or the space's source edges when
// edges_only is set) of the pair distortion. Pairs are scanned in a fixed
// order so the witness is deterministic; the per-pair solves run in parallel.
template <typename S>
DistortionResult<S> basis_distortion(const StochasticBasis<S>& basis,
                                     const FiniteMetricSpace<S>& space,
                                     bool edges_only = false,
                                     unsigned threads = 0) {
  StochasticBasis<S> norm =
      basis.normalised() ? basis : basis.normalised_copy();
  std::vector<S> norms = basis_norms(norm, space);

  std::vector<std::pair<int, int>> pairs;  // positions (px > py)
  if (edges_only) {
    if (space.source_edges.empty())
      throw ParameterOutOfRange("space carries no edge list for --edges-only");
    for (auto [u, v] : space.source_edges) {
      int pu = basis.order.to_pos[u], pv = basis.order.to_pos[v];
      pairs.emplace_back(std::max(pu, pv), std::min(pu, pv));
    }
  } else {
    for (int px = 1; px <= basis.count(); ++px)
      for (int py = 0; py < px; ++py) pairs.emplace_back(px, py);
  }

  if (pairs.empty()) {
    // single-point space: the empty basis is trivially isometric
    DistortionResult<S> res;
    res.value = S(1);
    res.x = res.y = 0;
    return res;
  }

  std::vector<S> values(pairs.size(), S(0));
  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads <= 1 || pairs.size() < 64) {
    for (size_t t = 0; t < pairs.size(); ++t) {
      auto [px, py] = pairs[t];
      S sum = detail::pair_coordinate_sum(norm, norms, px, py);
      values[t] = S(sum / space.d(norm.order.to_point[px],
                                  norm.order.to_point[py]));
    }
  } else {
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < threads; ++w)
      workers.emplace_back([&, w]() {
        for (size_t t = w; t < pairs.size(); t += threads) {
          auto [px, py] = pairs[t];
          S sum = detail::pair_coordinate_sum(norm, norms, px, py);
          values[t] = S(sum / space.d(norm.order.to_point[px],
                                      norm.order.to_point[py]));
        }
      });
    for (auto& w : workers) w.join();
  }

  DistortionResult<S> best;
  best.value = S(0);
  for (size_t t = 0; t < pairs.size(); ++t)
    if (best.x < 0 || values[t] > best.value) {
      best.value = values[t];
      best.x = norm.order.to_point[pairs[t].first];
      best.y = norm.order.to_point[pairs[t].second];
    }
  return best;
}

// If every row is a single lambda = 1 entry, the basis is molecular and its
// rows are the edges of a compatible tree.
template <typename S>
std::optional<CompatibleTree> molecular_tree(const StochasticBasis<S>& basis) {
  CompatibleTree t;
  t.parent.assign(basis.count() + 1, -1);
  for (int n = 1; n <= basis.count(); ++n) {
    if (basis.rows[n].size() != 1) return std::nullopt;
    const auto& [i, lam] = *basis.rows[n].begin();
    if (!(lam == 1)) return std::nullopt;
    t.parent[n] = i;
  }
  return t;
}

}  // namespace tcs
