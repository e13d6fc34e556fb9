#pragma once

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "tcs/basis.hpp"

namespace tcs {

inline int tree_guard_default() { return 9; }

// Streams every parent map with parent(n) < n; there are exactly N! of them.
inline void enumerate_trees(int n_count, int guard,
                            const std::function<void(const CompatibleTree&)>& f) {
  if (n_count > guard)
    throw TooLarge("tree enumeration guard exceeded: N = " +
                   std::to_string(n_count) + " > " + std::to_string(guard));
  CompatibleTree t;
  t.parent.assign(n_count + 1, 0);
  t.parent[0] = -1;
  // mixed-radix counter: parent[n] in {0..n-1}
  while (true) {
    f(t);
    int n = 1;
    while (n <= n_count) {
      if (t.parent[n] + 1 < n) {
        ++t.parent[n];
        break;
      }
      t.parent[n] = 0;
      ++n;
    }
    if (n > n_count) break;
  }
}

inline std::vector<CompatibleTree> all_trees(int n_count, int guard) {
  std::vector<CompatibleTree> out;
  enumerate_trees(n_count, guard,
                  [&](const CompatibleTree& t) { out.push_back(t); });
  return out;
}

// A probability over the compatible trees of one order, stored sparsely and
// keyed by canonical parent arrays.
template <typename S>
struct TreeDistribution {
  VertexOrder order;
  std::map<std::vector<int>, S> prob;

  void validate() const {
    S total(0);
    for (const auto& [parents, p] : prob) {
      if (!(p > 0)) throw ParameterOutOfRange("tree probabilities must be positive");
      CompatibleTree t{parents};
      if (t.size() != order.size())
        throw DimensionMismatch("tree size does not match order");
      t.validate();
      total += p;
    }
    if (!(total == 1)) throw ParameterOutOfRange("probabilities must sum to 1");
  }

  static TreeDistribution point_mass(VertexOrder order, const CompatibleTree& t) {
    TreeDistribution d;
    d.order = std::move(order);
    d.prob[t.parent] = S(1);
    return d;
  }
};

// Walks the tree path between positions px and py. Returns the two arms as
// strictly decreasing vertex sequences ending at the meeting point, which is
// the last element of both.
struct TreeArms {
  std::vector<int> from_x, from_y;  // inclusive of the meeting point
  int meeting;
};

inline TreeArms tree_arms(const CompatibleTree& t, int px, int py) {
  TreeArms arms;
  int a = px, b = py;
  while (a != b) {
    if (a > b) {
      arms.from_x.push_back(a);
      a = t.parent[a];
    } else {
      arms.from_y.push_back(b);
      b = t.parent[b];
    }
  }
  arms.meeting = a;
  arms.from_x.push_back(a);
  arms.from_y.push_back(a);
  return arms;
}

// Meeting point m_T(x,y): the minimal element of the tree path under F.
inline int meeting_point(const CompatibleTree& t, int px, int py) {
  return tree_arms(t, px, py).meeting;
}

// d_T(x,y): length of the tree path with each edge weighted by the ambient
// distance. Positions are interpreted through `order`.
template <typename S>
S tree_distance(const CompatibleTree& t, const FiniteMetricSpace<S>& space,
                const VertexOrder& order, int px, int py) {
  if (px == py) return S(0);
  TreeArms arms = tree_arms(t, px, py);
  S total(0);
  for (const auto* arm : {&arms.from_x, &arms.from_y})
    for (size_t j = 0; j + 1 < arm->size(); ++j)
      total += S(space.d(order.to_point[(*arm)[j]], order.to_point[(*arm)[j + 1]]));
  return total;
}

// pi(T) = prod_{e in E(T)} lambda_e.
template <typename S>
TreeDistribution<S> product_probability(const StochasticBasis<S>& basis,
                                        int guard = tree_guard_default()) {
  if (!basis.normalised())
    throw ParameterOutOfRange("product probability requires a normalised basis");
  TreeDistribution<S> dist;
  dist.order = basis.order;
  enumerate_trees(basis.count(), guard, [&](const CompatibleTree& t) {
    S p(1);
    for (int n = 1; n <= basis.count(); ++n) {
      S lam = basis.lambda(n, t.parent[n]);
      if (lam == 0) return;
      p = S(p * lam);
    }
    dist.prob[t.parent] = p;
  });
  return dist;
}

// E_p(d_T(x,y)) / d(x,y) over the support of p.
template <typename S>
S expected_distortion(const TreeDistribution<S>& dist,
                      const FiniteMetricSpace<S>& space, int px, int py) {
  if (px == py) throw SamePoint("expected distortion needs two distinct points");
  S acc(0);
  for (const auto& [parents, p] : dist.prob) {
    CompatibleTree t{parents};
    acc += S(p * tree_distance(t, space, dist.order, px, py));
  }
  return S(acc / space.d(dist.order.to_point[px], dist.order.to_point[py]));
}

namespace detail {

template <typename S>
std::map<std::pair<int, int>, S> edge_marginals(const TreeDistribution<S>& d) {
  std::map<std::pair<int, int>, S> marg;
  for (const auto& [parents, p] : d.prob)
    for (int n = 1; n < static_cast<int>(parents.size()); ++n)
      marg[{n, parents[n]}] += p;
  return marg;
}

}  // namespace detail

// p and p0 are compatible when they share the order and every pair of M has
// equal probability of being a tree edge.
template <typename S>
bool check_compatible(const TreeDistribution<S>& p, const TreeDistribution<S>& p0) {
  if (!(p.order == p0.order))
    throw OrderMismatch("distributions live over different orders");
  auto a = detail::edge_marginals(p);
  auto b = detail::edge_marginals(p0);
  for (const auto& [e, v] : a) {
    auto it = b.find(e);
    if (!(v == (it == b.end() ? S(0) : it->second))) return false;
  }
  for (const auto& [e, v] : b)
    if (a.find(e) == a.end() && !(v == 0)) return false;
  return true;
}

// (x,y)-independence: for every z in {x,y} and every s > t,
//   p({s,t} in [z, m_T]_T) = p({s,t} in T) * p(s in [z, m_T)_T).
template <typename S>
bool check_independent(const TreeDistribution<S>& dist, int px, int py) {
  if (px == py) throw SamePoint("independence needs two distinct points");
  if (px < py) std::swap(px, py);
  const int n_count = dist.order.size() - 1;
  auto edge_marg = detail::edge_marginals(dist);
  std::map<std::pair<int, int>, S> edge_in_arm[2];
  std::vector<S> vertex_in_arm[2];
  vertex_in_arm[0].assign(n_count + 1, S(0));
  vertex_in_arm[1].assign(n_count + 1, S(0));
  for (const auto& [parents, p] : dist.prob) {
    CompatibleTree t{parents};
    TreeArms arms = tree_arms(t, px, py);
    const std::vector<int>* arm[2] = {&arms.from_x, &arms.from_y};
    for (int z = 0; z < 2; ++z) {
      for (size_t j = 0; j + 1 < arm[z]->size(); ++j) {
        int n = (*arm[z])[j];
        vertex_in_arm[z][n] += p;
        edge_in_arm[z][{n, (*arm[z])[j + 1]}] += p;
      }
    }
  }
  for (int s = 1; s <= n_count; ++s)
    for (int t = 0; t < s; ++t) {
      auto it = edge_marg.find({s, t});
      S em = it == edge_marg.end() ? S(0) : it->second;
      for (int z = 0; z < 2; ++z) {
        auto jt = edge_in_arm[z].find({s, t});
        S lhs = jt == edge_in_arm[z].end() ? S(0) : jt->second;
        S rhs = S(em * vertex_in_arm[z][s]);
        if (!(lhs == rhs)) return false;
      }
    }
  return true;
}

// A chain for the order: a strictly decreasing vertex sequence. Trivial
// chains (a single vertex) are allowed.
using Chain = std::vector<int>;

// Per-vertex and per-chain data of the effective charge construction for a
// fixed pair x > y (positions). Self-contained: keeps a copy of the lambda
// rows so it stays valid independently of the basis it came from.
template <typename S>
struct EffectiveChargeState {
  int x = -1, y = -1;
  std::vector<S> alpha;     // extended overflow, positions 0..N
  std::vector<S> beta;      // effective cancelled charge
  std::vector<int> winner;  // position of the winning source (x or y)
  std::vector<int> loser;
  std::vector<S> denom_x, denom_y;  // gamma denominators per terminal vertex
  std::vector<std::map<int, S>> rows;
  std::map<Chain, S> chain_alpha, chain_beta, chain_gamma;

  S lambda(int n, int i) const {
    auto it = rows[n].find(i);
    return it == rows[n].end() ? S(0) : it->second;
  }

  struct ChainValues {
    S alpha, beta, gamma;
  };

  // Extends alpha, beta, gamma along one chain starting at x or y. Quotients
  // use the 0/0 = 0 convention; a nonzero numerator over a zero denominator
  // cannot arise and is reported as an internal error.
  ChainValues chain_values(const Chain& c) const {
    if (c.empty() || (c[0] != x && c[0] != y))
      throw ParameterOutOfRange("chains must start at x or y");
    const int s = c[0];
    ChainValues v{alpha[s], beta[s], S(1)};
    for (size_t j = 1; j < c.size(); ++j) {
      int u = c[j - 1], t = c[j];
      if (t >= u) throw ParameterOutOfRange("chain is not decreasing");
      S prod = S(v.alpha * lambda(u, t));
      const S& d = (s == x ? denom_x : denom_y)[t];
      S g(0);
      if (d == 0) {
        if (!(prod == 0))
          throw InternalError("vanishing gamma denominator with nonzero mass");
      } else {
        g = S(prod / d);
      }
      S a_next(0);
      if (winner[t] == winner[u]) a_next = S(prod + g * beta[t]);
      v.beta = S(prod - a_next);
      v.alpha = a_next;
      v.gamma = g;
    }
    return v;
  }
};

namespace detail {

template <typename S>
EffectiveChargeState<S> effective_charge_state(const StochasticBasis<S>& basis,
                                               int px, int py) {
  const int n_count = basis.count();
  EffectiveChargeState<S> st;
  st.x = px;
  st.y = py;
  st.rows = basis.rows;

  std::vector<S> mu(n_count + 1, S(0));
  mu[px] += S(1);
  mu[py] -= S(1);
  st.alpha = alpha_extended(basis, std::move(mu));

  st.winner.assign(n_count + 1, 0);
  st.loser.assign(n_count + 1, 0);
  for (int n = 0; n <= n_count; ++n) {
    bool xwins = st.alpha[n] > 0;
    st.winner[n] = xwins ? px : py;
    st.loser[n] = xwins ? py : px;
  }

  st.beta.assign(n_count + 1, S(0));
  st.denom_x.assign(n_count + 1, S(0));
  st.denom_y.assign(n_count + 1, S(0));
  for (int m = 1; m <= n_count; ++m) {
    if (st.alpha[m] == 0) continue;
    for (const auto& [i, lam] : basis.rows[m]) {
      S contrib = S(lam * st.alpha[m]);
      if (st.winner[m] != st.winner[i]) st.beta[i] += contrib;
      if (st.winner[m] == px && m <= px) st.denom_x[i] += contrib;
      if (st.winner[m] == py && m <= py) st.denom_y[i] += contrib;
    }
  }
  return st;
}

// Enumerates every chain starting at s (all decreasing extensions).
template <typename S>
void fill_chain_tables(EffectiveChargeState<S>& st, int s) {
  Chain c{s};
  std::function<void(int)> rec = [&](int last) {
    auto v = st.chain_values(c);
    st.chain_alpha[c] = v.alpha;
    st.chain_beta[c] = v.beta;
    st.chain_gamma[c] = v.gamma;
    for (int t = last - 1; t >= 0; --t) {
      c.push_back(t);
      rec(t);
      c.pop_back();
    }
  };
  rec(s);
}

}  // namespace detail

// The effective charge probability for the pair {x,y}: assigns to each tree
//   p(T) = |beta([x,m_T]_T) beta([y,m_T]_T)| / |beta(m_T)|
//          * prod_{e in E(T) \ E([x,y]_T)} lambda_e,
// with 0/0 = 0. Requires a normalised basis; positions are swapped so x > y.
template <typename S>
std::pair<TreeDistribution<S>, EffectiveChargeState<S>> effective_charge(
    const StochasticBasis<S>& basis, int px, int py,
    int guard = tree_guard_default(), bool fill_chains = true) {
  if (px == py) throw SamePoint("effective charge needs two distinct points");
  if (px < py) std::swap(px, py);
  if (!basis.normalised())
    throw ParameterOutOfRange("effective charge requires a normalised basis");

  EffectiveChargeState<S> st = detail::effective_charge_state(basis, px, py);

  TreeDistribution<S> dist;
  dist.order = basis.order;
  const int n_count = basis.count();
  enumerate_trees(n_count, guard, [&](const CompatibleTree& t) {
    TreeArms arms = tree_arms(t, px, py);
    auto vx = st.chain_values(arms.from_x);
    auto vy = st.chain_values(arms.from_y);
    S num = num::abs_val(S(vx.beta * vy.beta));
    if (num == 0) return;
    const S& den = st.beta[arms.meeting];
    if (den == 0)
      throw InternalError("effective charge: nonzero mass over zero beta");
    S p = S(num / num::abs_val(den));
    std::vector<char> on_path(n_count + 1, 0);
    for (const auto* arm : {&arms.from_x, &arms.from_y})
      for (size_t j = 0; j + 1 < arm->size(); ++j) on_path[(*arm)[j]] = 1;
    for (int n = 1; n <= n_count && p > 0; ++n) {
      if (on_path[n]) continue;
      p = S(p * basis.lambda(n, t.parent[n]));
    }
    if (p > 0) dist.prob[t.parent] += p;
  });

  if (fill_chains && px <= 14) {
    detail::fill_chain_tables(st, px);
    detail::fill_chain_tables(st, py);
  }
  return {std::move(dist), std::move(st)};
}

// Path-marginalised evaluation of the effective-charge expectation: the
// distribution factorises over [x,y]_T, so the expectation needs only the
// path weights p(P) = |beta([x,m]_P) beta([y,m]_P)| / |beta(m)|. Usable
// beyond the tree-enumeration guard. Returns {expected distortion, mass}.
template <typename S>
std::pair<S, S> effective_expectation_paths(const StochasticBasis<S>& basis,
                                            const FiniteMetricSpace<S>& space,
                                            int px, int py,
                                            int position_guard = 22) {
  if (px == py) throw SamePoint("effective expectation needs distinct points");
  if (px < py) std::swap(px, py);
  if (px > position_guard)
    throw TooLarge("path enumeration guard exceeded: position " +
                   std::to_string(px) + " > " + std::to_string(position_guard));
  if (!basis.normalised())
    throw ParameterOutOfRange("effective charge requires a normalised basis");
  EffectiveChargeState<S> st = detail::effective_charge_state(basis, px, py);

  const VertexOrder& order = basis.order;
  auto arm_length = [&](const Chain& c) {
    S len(0);
    for (size_t j = 0; j + 1 < c.size(); ++j)
      len += S(space.d(order.to_point[c[j]], order.to_point[c[j + 1]]));
    return len;
  };

  S expectation(0), mass(0);
  std::vector<char> used(basis.count() + 1, 0);
  Chain cx{px}, cy{py};
  S beta_y(0), len_y(0);
  int meet = 0;

  std::function<void(int)> rec_x = [&](int last) {
    if (last == meet) {
      auto vx = st.chain_values(cx);
      if (!(vx.beta == 0)) {
        S p = S(num::abs_val(S(vx.beta * beta_y)) / num::abs_val(st.beta[meet]));
        mass += p;
        expectation += S(p * S(len_y + arm_length(cx)));
      }
      return;
    }
    for (int t = last - 1; t >= meet; --t) {
      if (used[t]) continue;
      cx.push_back(t);
      rec_x(t);
      cx.pop_back();
    }
  };
  std::function<void(int)> rec_y = [&](int last) {
    if (last == meet) {
      auto vy = st.chain_values(cy);
      if (!(vy.beta == 0)) {
        beta_y = vy.beta;
        len_y = arm_length(cy);
        for (int v : cy) used[v] = 1;
        used[meet] = 0;
        rec_x(px);
        for (int v : cy) used[v] = 0;
      }
      return;
    }
    for (int t = last - 1; t >= meet; --t) {
      cy.push_back(t);
      rec_y(t);
      cy.pop_back();
    }
  };

  for (meet = 0; meet <= py; ++meet) {
    if (st.beta[meet] == 0) continue;  // every arm beta vanishes with it
    cx.assign(1, px);
    cy.assign(1, py);
    rec_y(py);
  }
  S d = space.d(order.to_point[px], order.to_point[py]);
  return {S(expectation / d), mass};
}

// Chain mass pi((z -> n)) = sum over decreasing chains from z to n of the
// product of lambda along the chain; equals b*_n(delta_z) by the product
// identities.
template <typename S>
S chain_molecule_mass(const StochasticBasis<S>& basis, int pz, int pn) {
  if (pn > pz) return S(0);
  std::vector<S> cm(pz + 1, S(0));
  cm[pz] = S(1);
  for (int v = pz - 1; v >= pn; --v) {
    S acc(0);
    for (int u = v + 1; u <= pz; ++u) {
      if (cm[u] == 0) continue;
      S lam = basis.lambda(u, v);
      if (lam == 0) continue;
      acc += S(lam * cm[u]);
    }
    cm[v] = acc;
  }
  return cm[pn];
}

// Per-pair summary: the coordinate sum, both expectations and the
// independence flag of the product probability.
template <typename S>
struct PairReport {
  int x, y;  // point indices
  S d;
  S pair_distortion;
  S expectation_effective;
  S expectation_product;
  bool product_independent;
  bool effective_matches;  // expectation_effective == pair_distortion
};

template <typename S>
std::vector<PairReport<S>> min_expected_distortion_report(
    const StochasticBasis<S>& basis, const FiniteMetricSpace<S>& space,
    int guard = tree_guard_default()) {
  StochasticBasis<S> norm =
      basis.normalised() ? basis : basis.normalised_copy();
  TreeDistribution<S> pi = product_probability(norm, guard);
  std::vector<S> norms = basis_norms(norm, space);
  std::vector<PairReport<S>> out;
  for (int px = 1; px <= norm.count(); ++px)
    for (int py = 0; py < px; ++py) {
      PairReport<S> row;
      row.x = norm.order.to_point[px];
      row.y = norm.order.to_point[py];
      row.d = space.d(row.x, row.y);
      S sum = detail::pair_coordinate_sum(norm, norms, px, py);
      row.pair_distortion = S(sum / row.d);
      auto [eff, st] = effective_charge(norm, px, py, guard, false);
      row.expectation_effective = expected_distortion(eff, space, px, py);
      row.expectation_product = expected_distortion(pi, space, px, py);
      row.product_independent = check_independent(pi, px, py);
      row.effective_matches = row.expectation_effective == row.pair_distortion;
      out.push_back(std::move(row));
    }
  return out;
}

}  // namespace tcs
