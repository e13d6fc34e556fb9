#pragma once

#include <random>

#include "tcs/basis.hpp"

namespace tcs {

// Bounded-budget local search toward the minimal stochastic-basis distortion.
// A heuristic, not a minimiser: hill climbing from the delta basis over
// adjacent order transpositions, molecular reassignments and simplex moves on
// the lambda rows. The result is never worse than the initial delta basis;
// ties prefer the lexicographically smaller order.
template <typename S>
struct SearchResult {
  StochasticBasis<S> basis;
  S score;
  long evaluations = 0;
};

namespace detail {

template <typename S>
StochasticBasis<S> swap_adjacent(const StochasticBasis<S>& b, int j) {
  // Swap the points at positions j and j+1 (j >= 1). Rows above swap the two
  // column keys; the rows at j and j+1 trade places, and any mass the old row
  // j+1 held on the old position j is rerouted to the basepoint.
  StochasticBasis<S> out = b;
  std::swap(out.order.to_point[j], out.order.to_point[j + 1]);
  out.order.rebuild_inverse();
  for (int n = j + 2; n <= b.count(); ++n) {
    auto& row = out.rows[n];
    auto itj = row.find(j), itj1 = row.find(j + 1);
    S vj = itj == row.end() ? S(0) : itj->second;
    S vj1 = itj1 == row.end() ? S(0) : itj1->second;
    row.erase(j);
    row.erase(j + 1);
    if (!(vj == 0)) row[j + 1] = vj;
    if (!(vj1 == 0)) row[j] = vj1;
  }
  std::map<int, S> new_j, new_j1;
  for (const auto& [i, v] : b.rows[j + 1]) {
    if (i == j)
      new_j[0] += v;  // would point above itself after the swap
    else
      new_j[i] += v;
  }
  new_j1 = b.rows[j];
  out.rows[j] = std::move(new_j);
  out.rows[j + 1] = std::move(new_j1);
  return out;
}

}  // namespace detail

template <typename S>
SearchResult<S> search_basis(const FiniteMetricSpace<S>& space, long budget,
                             unsigned long seed) {
  SearchResult<S> best;
  best.basis = StochasticBasis<S>::delta(space.size());
  best.score = basis_distortion(best.basis, space).value;

  auto lex_less = [](const VertexOrder& a, const VertexOrder& b) {
    return a.to_point < b.to_point;
  };
  auto consider = [&](const StochasticBasis<S>& cand) {
    if (best.evaluations >= budget) return false;
    ++best.evaluations;
    S score = basis_distortion(cand, space).value;
    if (score < best.score ||
        (score == best.score && lex_less(cand.order, best.basis.order))) {
      best.basis = cand;
      best.score = score;
      return true;
    }
    return false;
  };

  const int n_count = space.size() - 1;
  if (n_count <= 1) return best;  // nothing to move: row 1 is forced

  // Systematic molecular sweep: for each row, try sending all mass to a
  // single earlier position.
  bool improved = true;
  while (improved && best.evaluations < budget) {
    improved = false;
    for (int n = 1; n <= n_count && best.evaluations < budget; ++n)
      for (int i = 0; i < n && best.evaluations < budget; ++i) {
        StochasticBasis<S> cand = best.basis;
        cand.rows[n].clear();
        cand.rows[n][i] = S(1);
        if (consider(cand)) improved = true;
      }
  }

  // Randomised refinement: order transpositions and projected simplex moves
  // with step halving.
  std::mt19937_64 rng(seed);
  while (best.evaluations < budget) {
    unsigned kind = static_cast<unsigned>(rng() % 2);
    if (kind == 0 && n_count >= 2) {
      int j = 1 + static_cast<int>(rng() % (n_count - 1));
      consider(detail::swap_adjacent(best.basis, j));
    } else {
      int n = 1 + static_cast<int>(rng() % n_count);
      if (n < 1) continue;
      int i = static_cast<int>(rng() % n);
      int j = static_cast<int>(rng() % n);
      if (i == j) continue;
      S avail = best.basis.lambda(n, i);
      if (avail == 0) continue;
      S step = avail;
      for (int h = 0; h < 10 && best.evaluations < budget; ++h) {
        StochasticBasis<S> cand = best.basis;
        S remaining = S(cand.rows[n][i] - step);
        if (remaining == 0)
          cand.rows[n].erase(i);
        else
          cand.rows[n][i] = remaining;
        cand.rows[n][j] += step;
        if (consider(cand)) break;
        step = S(step / S(2));
      }
    }
  }
  return best;
}

}  // namespace tcs
