#pragma once

#include <map>
#include <utility>
#include <vector>

#include "tcs/metric.hpp"

namespace tcs {

// A signed measure with zero total mass: the stored value at the basepoint
// (index 0) is always recomputed so the total is zero.
template <typename S>
struct TransportProblem {
  std::map<int, S> mass;  // point index -> mass, completed at 0

  void canonicalize() {
    S total(0);
    for (auto& [i, v] : mass)
      if (i != 0) total += v;
    mass[0] = S(-total);
    for (auto it = mass.begin(); it != mass.end();)
      it = (it->second == 0) ? mass.erase(it) : ++it;
  }

  static TransportProblem molecule(int x, int y) {
    TransportProblem p;
    p.mass[x] += S(1);
    p.mass[y] -= S(1);
    p.canonicalize();
    return p;
  }

  static TransportProblem from_labels(const FiniteMetricSpace<S>& space,
                                      const std::map<std::string, S>& by_label) {
    TransportProblem p;
    for (const auto& [label, v] : by_label) p.mass[space.index_of(label)] = v;
    p.canonicalize();
    return p;
  }

  S at(int i) const {
    auto it = mass.find(i);
    return it == mass.end() ? S(0) : it->second;
  }
  bool is_zero() const { return mass.empty(); }
};

template <typename S>
struct TransportPlan {
  struct Move {
    S amount;
    int from, to;
  };
  std::vector<Move> moves;

  S cost(const FiniteMetricSpace<S>& space) const {
    S c(0);
    for (const auto& m : moves) c += S(m.amount * space.d(m.from, m.to));
    return c;
  }
};

// Multiplies rationals by the lcm of their denominators so flow capacities
// are integral. For double mode this is the identity.
template <typename S>
struct ScaleToIntegers {
  void feed(const S&) {}
  S apply(const S& x) const { return x; }
  S unapply(const S& x) const { return x; }
};

template <>
struct ScaleToIntegers<Rational> {
  mpz_class lcm_den{1};
  void feed(const Rational& x) {
    mpz_class l;
    mpz_lcm(l.get_mpz_t(), lcm_den.get_mpz_t(), x.get_den().get_mpz_t());
    lcm_den = l;
  }
  Rational apply(const Rational& x) const { return Rational(x * lcm_den); }
  Rational unapply(const Rational& x) const { return Rational(x / lcm_den); }
};

namespace detail {

// Min-cost flow by successive cheapest augmenting paths (Bellman-Ford on the
// residual network), exact arithmetic. Capacities are integral after the
// caller clears denominators, so every augmentation moves at least one unit
// and the loop terminates.
template <typename S>
class MinCostFlow {
 public:
  explicit MinCostFlow(int n) : head_(n, -1) {}

  void add_arc(int u, int v, S cap, S cost) {
    arcs_.push_back({v, head_[u], std::move(cap), cost});
    head_[u] = static_cast<int>(arcs_.size()) - 1;
    arcs_.push_back({u, head_[v], S(0), S(-cost)});
    head_[v] = static_cast<int>(arcs_.size()) - 1;
  }

  // Sends as much flow as possible from s to t; returns total cost.
  S run(int s, int t) {
    const int n = static_cast<int>(head_.size());
    S total_cost(0);
    while (true) {
      std::vector<S> dist(n, S(0));
      std::vector<bool> reached(n, false);
      std::vector<int> pre_arc(n, -1);
      reached[s] = true;
      bool changed = true;
      while (changed) {  // Bellman-Ford; tiny graphs
        changed = false;
        for (int u = 0; u < n; ++u) {
          if (!reached[u]) continue;
          for (int a = head_[u]; a != -1; a = arcs_[a].next) {
            if (!(arcs_[a].cap > 0)) continue;
            int v = arcs_[a].to;
            S nd = S(dist[u] + arcs_[a].cost);
            if (!reached[v] || nd < dist[v]) {
              reached[v] = true;
              dist[v] = nd;
              pre_arc[v] = a;
              changed = true;
            }
          }
        }
      }
      if (!reached[t]) break;
      S push = arcs_[pre_arc[t]].cap;
      for (int v = t; v != s; v = arcs_[pre_arc[v] ^ 1].to)
        if (arcs_[pre_arc[v]].cap < push) push = arcs_[pre_arc[v]].cap;
      for (int v = t; v != s; v = arcs_[pre_arc[v] ^ 1].to) {
        arcs_[pre_arc[v]].cap -= push;
        arcs_[pre_arc[v] ^ 1].cap += push;
      }
      total_cost += S(push * dist[t]);
    }
    return total_cost;
  }

  const S& reverse_cap(int arc_index) const { return arcs_[arc_index].cap; }

 private:
  struct Arc {
    int to, next;
    S cap, cost;
  };
  std::vector<Arc> arcs_;
  std::vector<int> head_;
};

}  // namespace detail

// A witness plan of minimal cost (not unique). mu == 0 gives an empty plan.
template <typename S>
TransportPlan<S> optimal_plan(const FiniteMetricSpace<S>& space,
                              const TransportProblem<S>& mu) {
  std::vector<int> supply_pts, demand_pts;
  std::vector<S> supply_amt, demand_amt;
  for (const auto& [i, v] : mu.mass) {
    if (i < 0 || i >= space.size())
      throw UnknownPoint("transport problem escapes the space");
    if (v > 0) {
      supply_pts.push_back(i);
      supply_amt.push_back(v);
    } else if (v < 0) {
      demand_pts.push_back(i);
      demand_amt.push_back(S(-v));
    }
  }
  TransportPlan<S> plan;
  if (supply_pts.empty()) return plan;  // mu == 0

  ScaleToIntegers<S> scale;
  for (auto& a : supply_amt) scale.feed(a);
  for (auto& a : demand_amt) scale.feed(a);

  const int p = static_cast<int>(supply_pts.size());
  const int q = static_cast<int>(demand_pts.size());
  const int src = 0, snk = p + q + 1;
  detail::MinCostFlow<S> mcf(p + q + 2);
  for (int a = 0; a < p; ++a)
    mcf.add_arc(src, 1 + a, scale.apply(supply_amt[a]), S(0));
  // add_arc appends two entries per call; the forward arc of call m is 2m.
  std::vector<std::vector<int>> arc_id(p, std::vector<int>(q));
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < q; ++b) {
      arc_id[a][b] = 2 * (p + a * q + b);
      mcf.add_arc(1 + a, 1 + p + b, scale.apply(supply_amt[a]),
                  space.d(supply_pts[a], demand_pts[b]));
    }
  for (int b = 0; b < q; ++b)
    mcf.add_arc(1 + p + b, snk, scale.apply(demand_amt[b]), S(0));

  mcf.run(src, snk);
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < q; ++b) {
      S flow = mcf.reverse_cap(arc_id[a][b] + 1);
      if (flow > 0)
        plan.moves.push_back({scale.unapply(flow), supply_pts[a], demand_pts[b]});
    }
  return plan;
}

// OC(mu): minimum cost over plans decomposing mu into weighted molecules.
template <typename S>
S optimal_cost(const FiniteMetricSpace<S>& space, const TransportProblem<S>& mu) {
  return optimal_plan(space, mu).cost(space);
}

// Builds mu from a combination of molecules and returns its optimal cost.
template <typename S>
S norm_molecule_combination(const FiniteMetricSpace<S>& space,
                            const std::map<std::pair<int, int>, S>& coefficients) {
  TransportProblem<S> mu;
  for (const auto& [pair, c] : coefficients) {
    if (pair.first == pair.second)
      throw SamePoint("molecule endpoints must differ");
    mu.mass[pair.first] += c;
    mu.mass[pair.second] -= c;
  }
  mu.canonicalize();
  return optimal_cost(space, mu);
}

}  // namespace tcs
