#include "tcs/laakso.hpp"

namespace tcs {

namespace {

// Inserts the six-vertex gadget into the oriented edge (u, v), u < v by id.
// Appends the four new vertices and the six new edges.
void insert_gadget(LaaksoGraph& g, int u, int v, int gen,
                   std::vector<std::array<int, 2>>& new_edges,
                   std::vector<int>& new_parents, int parent_index) {
  const int base = g.num_vertices();
  static const char* role_tag[4] = {"a", "t", "b", "c"};
  for (int r = 0; r < 4; ++r) {
    g.labels.push_back("(" + g.labels[u] + "," + g.labels[v] + ")" +
                       role_tag[r]);
    g.generation.push_back(gen);
    g.role.push_back(static_cast<LaaksoGraph::Role>(r));
    g.replaced_edge.push_back({u, v});
  }
  const int ju = base + LaaksoGraph::JunctionNearU;
  const int top = base + LaaksoGraph::Top;
  const int bot = base + LaaksoGraph::Bottom;
  const int jv = base + LaaksoGraph::JunctionNearV;
  const std::array<std::array<int, 2>, 6> edges = {{{u, ju},
                                                    {ju, top},
                                                    {ju, bot},
                                                    {top, jv},
                                                    {bot, jv},
                                                    {jv, v}}};
  for (auto e : edges) {
    if (e[0] > e[1]) std::swap(e[0], e[1]);
    new_edges.push_back(e);
    new_parents.push_back(parent_index);
  }
}

}  // namespace

std::pair<LaaksoGraph, FiniteMetricSpace<Rational>> build_laakso(int k,
                                                                 int guard) {
  if (k < 1) throw ParameterOutOfRange("Laakso graphs need k >= 1");
  if (k > guard)
    throw TooLarge("Laakso guard exceeded: k = " + std::to_string(k) + " > " +
                   std::to_string(guard));

  LaaksoGraph g;
  g.k = k;
  // L_0: the single edge {0, 5}; its endpoints belong to generation 1 (they
  // are vertices of L_1).
  g.labels = {"0", "1", "2", "3", "4", "5"};
  g.generation.assign(6, 1);
  g.role.assign(6, LaaksoGraph::JunctionNearU);
  g.replaced_edge.assign(6, {-1, -1});
  g.edges_by_generation.push_back({{0, 5}});
  g.edge_parent.push_back({});

  // L_1 = gadget on {0,5}; ids 1..4 are (near-0 junction, top, bottom,
  // near-5 junction), matching BFS order from vertex 0.
  g.edges_by_generation.push_back({{0, 1},
                                   {1, 2},
                                   {1, 3},
                                   {2, 4},
                                   {3, 4},
                                   {4, 5}});
  g.edge_parent.push_back(std::vector<int>(6, 0));
  g.role[1] = LaaksoGraph::JunctionNearU;
  g.role[2] = LaaksoGraph::Top;
  g.role[3] = LaaksoGraph::Bottom;
  g.role[4] = LaaksoGraph::JunctionNearV;
  for (int n = 1; n <= 4; ++n) g.replaced_edge[n] = {0, 5};

  for (int gen = 2; gen <= k; ++gen) {
    std::vector<std::array<int, 2>> new_edges;
    std::vector<int> new_parents;
    const auto& prev = g.edges_by_generation[gen - 1];
    for (int e = 0; e < static_cast<int>(prev.size()); ++e)
      insert_gadget(g, prev[e][0], prev[e][1], gen, new_edges, new_parents, e);
    g.edges_by_generation.push_back(std::move(new_edges));
    g.edge_parent.push_back(std::move(new_parents));
  }

  WeightedGraph<Rational> wg;
  wg.vertices = g.labels;
  for (const auto& e : g.final_edges()) wg.add_edge(e[0], e[1], Rational(1));
  FiniteMetricSpace<Rational> space = geodesic_metric(wg, 0);
  return {std::move(g), std::move(space)};
}

VertexOrder laakso_order(const LaaksoGraph& g) {
  return VertexOrder::identity(g.num_vertices());
}

StochasticBasis<Rational> laakso_basis(const LaaksoGraph& g,
                                       const VertexOrder& order) {
  const int n_points = g.num_vertices();
  if (order.size() != n_points)
    throw DimensionMismatch("order does not match the Laakso graph");
  for (int pos = 1; pos < n_points; ++pos)
    if (g.generation[order.to_point[pos - 1]] >
        g.generation[order.to_point[pos]])
      throw OrderViolation("order is not generation-monotone");

  StochasticBasis<Rational> b;
  b.order = order;
  b.rows.resize(n_points);
  b.rho.assign(n_points, Rational(1));
  for (int pos = 1; pos < n_points; ++pos) {
    int n = order.to_point[pos];
    if (n <= 5) {
      b.rows[pos][order.to_pos[0]] = Rational(1);
      continue;
    }
    auto [u, v] = std::pair(g.replaced_edge[n][0], g.replaced_edge[n][1]);
    auto [du, dv] = LaaksoGraph::role_dists[g.role[n]];
    // Cross assignment: the weight on an endpoint is the distance to the
    // other endpoint over 4, so most mass lands on the nearer endpoint.
    b.rows[pos][order.to_pos[u]] = make_ratio(dv, 4);
    b.rows[pos][order.to_pos[v]] = make_ratio(du, 4);
  }
  return b;
}

DescentChain reconstruct_descent_chain(const LaaksoGraph& g, int x, int y) {
  if (x == y) throw SamePoint("descent chain needs an edge");
  if (x < y) std::swap(x, y);
  bool is_edge = false;
  for (const auto& e : g.final_edges())
    if ((e[0] == y && e[1] == x)) is_edge = true;
  if (!is_edge)
    throw ParameterOutOfRange("descent chains are defined for edges of L_k");

  DescentChain chain;
  chain.sets.assign(g.k, {-1, -1});
  chain.oriented.assign(g.k, {-1, -1});
  chain.sets[g.k - 1] = {std::min(x, y), std::max(x, y)};
  chain.oriented[g.k - 1] = {x, y};  // n_k^+ = x, n_k^- = y

  for (int i = g.k - 1; i >= 1; --i) {
    const auto& a_next = chain.sets[i];  // a_{i+1}
    int z = -1;
    for (int v : {a_next[0], a_next[1]})
      if (g.generation[v] == i + 1) z = v;
    if (z < 0) throw InternalError("descent chain lost its fresh endpoint");
    chain.sets[i - 1] = g.replaced_edge[z];

    // Orientation: a shared endpoint keeps its sign; otherwise n_i^+ is the
    // endpoint of a_i closer to n_{i+1}^+ inside generation i+1. Top/bottom
    // vertices are equidistant from both endpoints, which leaves the
    // orientation ambiguous; that is reported, not guessed.
    int plus = chain.oriented[i][0], minus = chain.oriented[i][1];
    const auto& a = chain.sets[i - 1];
    if (plus == a[0] || plus == a[1]) {
      chain.oriented[i - 1] = {plus, plus == a[0] ? a[1] : a[0]};
    } else if (minus == a[0] || minus == a[1]) {
      chain.oriented[i - 1] = {minus == a[0] ? a[1] : a[0], minus};
    } else if (plus >= 0 && g.generation[plus] == i + 1) {
      auto [du, dv] = LaaksoGraph::role_dists[g.role[plus]];
      if (du < dv)
        chain.oriented[i - 1] = {a[0], a[1]};  // a[0] = u is closer
      else if (dv < du)
        chain.oriented[i - 1] = {a[1], a[0]};
      else
        chain.orientation_ambiguous = true;
    } else {
      chain.orientation_ambiguous = true;
    }
  }
  return chain;
}

LaaksoReport verify_laakso_bound(int k, bool full_pairs, unsigned threads,
                                 int guard) {
  auto [graph, space] = build_laakso(k, guard);
  VertexOrder order = laakso_order(graph);
  StochasticBasis<Rational> basis = laakso_basis(graph, order);

  LaaksoReport rep;
  rep.k = k;
  rep.n_vertices = graph.num_vertices();
  rep.edges_only = !full_pairs;
  DistortionResult<Rational> res =
      basis_distortion(basis, space, !full_pairs, threads);
  rep.distortion = res.value;
  rep.bound = Rational(8 * k);
  rep.lower_bound = make_ratio(3 * k - 5, 8);
  rep.witness_x = space.points[res.x];
  rep.witness_y = space.points[res.y];
  Rational lower = rep.lower_bound < 1 ? Rational(1) : rep.lower_bound;
  rep.upper_ok = rep.distortion <= rep.bound;
  rep.lower_ok = rep.distortion >= lower;
  return rep;
}

}  // namespace tcs
