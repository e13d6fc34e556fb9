#pragma once

// Test-only oracles, independent of the library code paths they check.

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "tcs/basis.hpp"
#include "tcs/metric.hpp"
#include "tcs/transport.hpp"

namespace tcs::test {

// Exact Hungarian assignment (potentials form), n rows <= m cols.
inline Rational hungarian_min_cost(const std::vector<std::vector<Rational>>& a) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(a[0].size());
  std::vector<Rational> u(n + 1, 0), v(m + 1, 0);
  std::vector<int> match(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<Rational> minv(m + 1, 0);
    std::vector<bool> have(m + 1, false), used(m + 1, false);
    do {
      used[j0] = true;
      int i0 = match[j0], j1 = -1;
      Rational delta;
      bool have_delta = false;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        Rational cur = a[i0 - 1][j - 1] - u[i0] - v[j];
        if (!have[j] || cur < minv[j]) {
          minv[j] = cur;
          have[j] = true;
          way[j] = j0;
        }
        if (!have_delta || minv[j] < delta) {
          delta = minv[j];
          have_delta = true;
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else if (have[j]) {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }
  Rational cost = 0;
  for (int j = 1; j <= m; ++j)
    if (match[j]) cost += a[match[j] - 1][j - 1];
  return cost;
}

// Unit-split matching oracle for integer-mass transportation problems.
inline Rational matching_oracle(const FiniteMetricSpace<Rational>& space,
                                const TransportProblem<Rational>& mu) {
  std::vector<int> sources, sinks;
  for (const auto& [p, mass] : mu.mass) {
    Rational m = mass;
    while (m > 0) {
      sources.push_back(p);
      m -= 1;
    }
    while (m < 0) {
      sinks.push_back(p);
      m += 1;
    }
  }
  if (sources.empty()) return Rational(0);
  std::vector<std::vector<Rational>> cost(sources.size(),
                                          std::vector<Rational>(sinks.size()));
  for (size_t i = 0; i < sources.size(); ++i)
    for (size_t j = 0; j < sinks.size(); ++j)
      cost[i][j] = space.d(sources[i], sinks[j]);
  return hungarian_min_cost(cost);
}

// Exhaustive assignment by permutations; validates the Hungarian oracle on
// tiny instances.
inline Rational permutation_min_cost(std::vector<std::vector<Rational>> a) {
  const int n = static_cast<int>(a.size());
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  Rational best = -1;
  do {
    Rational c = 0;
    for (int i = 0; i < n; ++i) c += a[i][perm[i]];
    if (best < 0 || c < best) best = c;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Brute-force geodesics: min over all simple paths.
inline Rational brute_force_shortest(const WeightedGraph<Rational>& g, int s,
                                     int t) {
  const int n = static_cast<int>(g.vertices.size());
  std::vector<std::vector<std::pair<int, Rational>>> adj(n);
  for (const auto& e : g.edges) {
    adj[e.u].push_back({e.v, e.w});
    adj[e.v].push_back({e.u, e.w});
  }
  Rational best = -1;
  std::vector<bool> seen(n, false);
  std::function<void(int, Rational)> dfs = [&](int u, Rational len) {
    if (u == t) {
      if (best < 0 || len < best) best = len;
      return;
    }
    seen[u] = true;
    for (auto& [v, w] : adj[u])
      if (!seen[v]) dfs(v, Rational(len + w));
    seen[u] = false;
  };
  dfs(s, Rational(0));
  return best;
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(unsigned long seed) : gen(seed) {}
  long uniform(long lo, long hi) {  // inclusive
    return lo + static_cast<long>(gen() % static_cast<unsigned long>(hi - lo + 1));
  }
};

// Random geodesic metric from a complete graph with small integer weights.
inline FiniteMetricSpace<Rational> random_metric(Rng& rng, int n_points) {
  WeightedGraph<Rational> g;
  for (int i = 0; i < n_points; ++i) g.add_vertex(std::to_string(i));
  for (int i = 0; i < n_points; ++i)
    for (int j = i + 1; j < n_points; ++j)
      g.add_edge(i, j, Rational(rng.uniform(1, 9)));
  return geodesic_metric(g, 0);
}

// Random normalised stochastic basis: random order (basepoint fixed) and
// random rows with small rational entries.
inline StochasticBasis<Rational> random_basis(Rng& rng, int n_points) {
  std::vector<int> order(n_points);
  std::iota(order.begin(), order.end(), 0);
  for (int i = n_points - 1; i >= 2; --i)
    std::swap(order[i], order[1 + rng.uniform(0, i - 1)]);
  StochasticBasis<Rational> b;
  b.order = VertexOrder(std::move(order));
  b.rows.resize(n_points);
  b.rho.assign(n_points, Rational(1));
  for (int n = 1; n < n_points; ++n) {
    int support = 1 + static_cast<int>(rng.uniform(0, std::min(n, 3) - 1));
    std::vector<int> targets(n);
    std::iota(targets.begin(), targets.end(), 0);
    for (int i = n - 1; i >= 1; --i)
      std::swap(targets[i], targets[rng.uniform(0, i)]);
    targets.resize(support);
    Rational total = 0;
    std::map<int, Rational> raw;
    for (int t : targets) {
      Rational w(rng.uniform(1, 9));
      raw[t] += w;
      total += w;
    }
    for (auto& [t, w] : raw) b.rows[n][t] = Rational(w / total);
  }
  return b;
}

// Random zero-sum measure with small integer masses on <= max_support points.
inline TransportProblem<Rational> random_mu(Rng& rng,
                                            const FiniteMetricSpace<Rational>& m,
                                            int max_support, long max_mass) {
  TransportProblem<Rational> mu;
  int support = 1 + static_cast<int>(rng.uniform(0, max_support - 1));
  for (int s = 0; s < support; ++s) {
    int p = static_cast<int>(rng.uniform(0, m.size() - 1));
    long mass = rng.uniform(-max_mass, max_mass);
    if (mass != 0) mu.mass[p] += Rational(mass);
  }
  mu.canonicalize();
  return mu;
}

}  // namespace tcs::test
