#include <doctest.h>

#include "oracles.hpp"
#include "tcs/transport.hpp"

using namespace tcs;
using Mu = TransportProblem<Rational>;

TEST_SUITE("transport") {

TEST_CASE("molecule cost is the distance") {
  test::Rng rng(1);
  auto m = test::random_metric(rng, 6);
  for (int x = 0; x < m.size(); ++x)
    for (int y = 0; y < m.size(); ++y) {
      if (x == y) continue;
      CHECK(optimal_cost(m, Mu::molecule(x, y)) == m.d(x, y));
    }
}

TEST_CASE("single source ships directly") {
  test::Rng rng(2);
  auto m = test::random_metric(rng, 5);
  Mu mu;
  mu.mass[1] = 2;
  mu.mass[2] = -1;
  mu.mass[3] = -1;
  mu.canonicalize();
  CHECK(optimal_cost(m, mu) == Rational(m.d(1, 2) + m.d(1, 3)));
}

TEST_CASE("zero problem has empty plan") {
  test::Rng rng(3);
  auto m = test::random_metric(rng, 4);
  Mu mu;
  mu.canonicalize();
  CHECK(mu.is_zero());
  auto plan = optimal_plan(m, mu);
  CHECK(plan.moves.empty());
  CHECK(optimal_cost(m, mu) == 0);
}

TEST_CASE("basepoint completion") {
  Mu mu;
  mu.mass[2] = make_ratio(3, 2);
  mu.mass[1] = make_ratio(1, 2);
  mu.canonicalize();
  CHECK(mu.at(0) == Rational(-2));
}

TEST_CASE("crossing supplies pick the cheaper pairing") {
  // l1 square: supplies on the left, demands on the right; the straight
  // pairing costs 2, the crossed one 4.
  FiniteMetricSpace<Rational> m;
  m.points = {"L1", "L2", "R1", "R2"};
  auto d1 = [](int ax, int ay, int bx, int by) {
    return Rational(std::abs(ax - bx) + std::abs(ay - by));
  };
  int coords[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  m.dist.assign(4, std::vector<Rational>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      m.dist[i][j] = d1(coords[i][0], coords[i][1], coords[j][0], coords[j][1]);

  Mu mu;
  mu.mass[0] = 1;
  mu.mass[1] = 1;
  mu.mass[2] = -1;
  mu.mass[3] = -1;
  mu.canonicalize();
  CHECK(optimal_cost(m, mu) == 2);
  CHECK(optimal_cost(m, mu) == test::matching_oracle(m, mu));
  auto plan = optimal_plan(m, mu);
  Rational total = 0;
  for (const auto& mv : plan.moves) total += mv.amount;
  CHECK(total == 2);
}

TEST_CASE("hungarian oracle agrees with exhaustive permutations") {
  test::Rng rng(4);
  for (int round = 0; round < 30; ++round) {
    int n = 2 + static_cast<int>(rng.uniform(0, 3));
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a[i][j] = Rational(rng.uniform(0, 12));
    CHECK(test::hungarian_min_cost(a) == test::permutation_min_cost(a));
  }
}

TEST_CASE("optimal cost matches the matching oracle") {
  test::Rng rng(5);
  for (int round = 0; round < 60; ++round) {
    auto m = test::random_metric(rng, 4 + static_cast<int>(rng.uniform(0, 3)));
    auto mu = test::random_mu(rng, m, 4, 5);
    CHECK(optimal_cost(m, mu) == test::matching_oracle(m, mu));
  }
}

TEST_CASE("plans decompose mu with supplies and demands split") {
  test::Rng rng(6);
  for (int round = 0; round < 30; ++round) {
    auto m = test::random_metric(rng, 5);
    auto mu = test::random_mu(rng, m, 4, 5);
    auto plan = optimal_plan(m, mu);
    CHECK(plan.cost(m) == optimal_cost(m, mu));
    Mu recon;
    for (const auto& mv : plan.moves) {
      CHECK(mv.amount > 0);
      CHECK(mu.at(mv.from) > 0);
      CHECK(mu.at(mv.to) < 0);
      recon.mass[mv.from] += mv.amount;
      recon.mass[mv.to] -= mv.amount;
    }
    recon.canonicalize();
    Mu expect = mu;
    expect.canonicalize();
    CHECK(recon.mass == expect.mass);
  }
}

TEST_CASE("norm axioms") {
  test::Rng rng(7);
  for (int round = 0; round < 25; ++round) {
    auto m = test::random_metric(rng, 5);
    auto mu = test::random_mu(rng, m, 4, 4);
    auto nu = test::random_mu(rng, m, 4, 4);
    Rational nmu = optimal_cost(m, mu);
    CHECK(nmu >= 0);
    CHECK((nmu == 0) == mu.is_zero());

    Rational c(rng.uniform(-3, 3));
    Mu scaled;
    for (auto& [p, v] : mu.mass) scaled.mass[p] = Rational(c * v);
    scaled.canonicalize();
    CHECK(optimal_cost(m, scaled) == Rational(num::abs_val(c) * nmu));

    Mu sum;
    for (auto& [p, v] : mu.mass) sum.mass[p] += v;
    for (auto& [p, v] : nu.mass) sum.mass[p] += v;
    sum.canonicalize();
    CHECK(optimal_cost(m, sum) <= Rational(nmu + optimal_cost(m, nu)));
  }
}

TEST_CASE("lipschitz witnesses never beat the optimal cost") {
  test::Rng rng(8);
  for (int round = 0; round < 20; ++round) {
    auto m = test::random_metric(rng, 6);
    auto mu = test::random_mu(rng, m, 4, 4);
    Rational oc = optimal_cost(m, mu);
    for (int n = 0; n < m.size(); ++n) {
      // f_n(z) = d(n, z) - d(n, 0) is 1-Lipschitz and vanishes at 0
      Rational pairing = 0;
      for (const auto& [z, v] : mu.mass)
        pairing += Rational(v * Rational(m.d(n, z) - m.d(n, 0)));
      CHECK(pairing <= oc);
    }
  }
}

TEST_CASE("molecule combinations") {
  test::Rng rng(9);
  auto m = test::random_metric(rng, 5);
  using Key = std::pair<int, int>;
  std::map<Key, Rational> single{{{1, 2}, Rational(1)}};
  CHECK(norm_molecule_combination(m, single) == m.d(1, 2));

  std::map<Key, Rational> cancel{{{1, 2}, Rational(1)}, {{2, 1}, Rational(1)}};
  CHECK(norm_molecule_combination(m, cancel) == 0);

  std::map<Key, Rational> chain{{{1, 2}, Rational(1)}, {{2, 3}, Rational(1)}};
  CHECK(norm_molecule_combination(m, chain) <= Rational(m.d(1, 2) + m.d(2, 3)));

  // geodesic middle point: y on a shortest path between x and z
  WeightedGraph<Rational> pg;
  pg.add_vertex("0");
  pg.add_vertex("1");
  pg.add_vertex("2");
  pg.add_edge(0, 1, 2);
  pg.add_edge(1, 2, 3);
  auto pm = geodesic_metric(pg, 0);
  std::map<Key, Rational> geo{{{0, 1}, Rational(1)}, {{1, 2}, Rational(1)}};
  CHECK(norm_molecule_combination(pm, geo) == pm.d(0, 2));
}

TEST_CASE("unknown support point is rejected") {
  test::Rng rng(10);
  auto m = test::random_metric(rng, 3);
  Mu mu;
  mu.mass[7] = 1;
  mu.canonicalize();
  CHECK_THROWS_AS(optimal_cost(m, mu), UnknownPoint);
}

}  // TEST_SUITE
