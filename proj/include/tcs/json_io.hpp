#pragma once

#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tcs/basis.hpp"
#include "tcs/transport.hpp"

namespace tcs {

using Json = nlohmann::json;

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw FormatError("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

inline Rational rational_field(const Json& j) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw FormatError("expected a rational as \"p/q\" string or integer");
}

// {"points": [...], "edges": [[i, j, "w"], ...], "basepoint": 0}
// or {"points": [...], "dist": [["0", "1", ...], ...]}
inline FiniteMetricSpace<Rational> space_from_json(const Json& j) {
  if (!j.contains("points")) throw FormatError("space file needs \"points\"");
  std::vector<std::string> points = j.at("points").get<std::vector<std::string>>();
  int basepoint = j.value("basepoint", 0);

  if (j.contains("edges")) {
    WeightedGraph<Rational> g;
    g.vertices = points;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3)
        throw FormatError("edges must be [i, j, weight] triples");
      int u = e[0].get<int>(), v = e[1].get<int>();
      if (u < 0 || v < 0 || u >= static_cast<int>(points.size()) ||
          v >= static_cast<int>(points.size()))
        throw FormatError("edge endpoint out of range");
      g.add_edge(u, v, rational_field(e[2]));
    }
    return geodesic_metric(g, basepoint);
  }
  if (j.contains("dist")) {
    const auto& rows = j.at("dist");
    const int n = static_cast<int>(points.size());
    if (static_cast<int>(rows.size()) != n)
      throw FormatError("dist matrix size does not match points");
    FiniteMetricSpace<Rational> m;
    m.points = points;
    m.dist.assign(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rows[i].size()) != n)
        throw FormatError("dist matrix is not square");
      for (int c = 0; c < n; ++c) m.dist[i][c] = rational_field(rows[i][c]);
    }
    if (basepoint != 0) {
      // rotate the basepoint to index 0, keeping the rest stable
      std::vector<int> remap(n);
      remap[basepoint] = 0;
      int next = 1;
      for (int i = 0; i < n; ++i)
        if (i != basepoint) remap[i] = next++;
      FiniteMetricSpace<Rational> rot;
      rot.points.resize(n);
      rot.dist.assign(n, std::vector<Rational>(n));
      for (int i = 0; i < n; ++i) {
        rot.points[remap[i]] = m.points[i];
        for (int c = 0; c < n; ++c) rot.dist[remap[i]][remap[c]] = m.dist[i][c];
      }
      return rot;
    }
    return m;
  }
  throw FormatError("space file needs \"edges\" or \"dist\"");
}

inline Json space_to_json(const FiniteMetricSpace<Rational>& m) {
  Json j;
  j["points"] = m.points;
  j["basepoint"] = 0;
  Json rows = Json::array();
  for (const auto& row : m.dist) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(to_string(v));
    rows.push_back(r);
  }
  j["dist"] = rows;
  return j;
}

// {"mass": {"label": "p/q", ...}}
inline TransportProblem<Rational> mu_from_json(
    const Json& j, const FiniteMetricSpace<Rational>& space) {
  if (!j.contains("mass")) throw FormatError("measure file needs \"mass\"");
  std::map<std::string, Rational> by_label;
  for (const auto& [label, v] : j.at("mass").items())
    by_label[label] = rational_field(v);
  return TransportProblem<Rational>::from_labels(space, by_label);
}

// {"order": [...labels...], "rows": [{"n": 3, "coeffs": {"1": "1/2"}}, ...]}
inline StochasticBasis<Rational> basis_from_json(
    const Json& j, const FiniteMetricSpace<Rational>& space) {
  StochasticBasis<Rational> b;
  const int n_points = space.size();
  std::vector<int> pos_to_point;
  if (j.contains("order")) {
    for (const auto& label : j.at("order"))
      pos_to_point.push_back(space.index_of(label.get<std::string>()));
  } else {
    pos_to_point.resize(n_points);
    std::iota(pos_to_point.begin(), pos_to_point.end(), 0);
  }
  if (static_cast<int>(pos_to_point.size()) != n_points)
    throw FormatError("basis order does not cover the space");
  b.order = VertexOrder(std::move(pos_to_point));
  b.rows.resize(n_points);
  b.rho.assign(n_points, Rational(1));
  if (!j.contains("rows")) throw FormatError("basis file needs \"rows\"");
  std::vector<bool> seen(n_points, false);
  for (const auto& row : j.at("rows")) {
    int n = row.at("n").get<int>();
    if (n < 1 || n >= n_points) throw FormatError("row index out of range");
    if (seen[n]) throw FormatError("duplicate basis row " + std::to_string(n));
    seen[n] = true;
    for (const auto& [key, v] : row.at("coeffs").items()) {
      Rational value = rational_field(v);
      if (value == 0) continue;  // keep rows sparse
      b.rows[n][std::stoi(key)] = value;
    }
  }
  for (int n = 1; n < n_points; ++n)
    if (!seen[n]) throw FormatError("missing basis row " + std::to_string(n));
  b.validate();
  return b;
}

inline Json basis_to_json(const StochasticBasis<Rational>& b,
                          const FiniteMetricSpace<Rational>& space) {
  Json j;
  Json order = Json::array();
  for (int pos = 0; pos < b.order.size(); ++pos)
    order.push_back(space.points[b.order.to_point[pos]]);
  j["order"] = order;
  Json rows = Json::array();
  for (int n = 1; n <= b.count(); ++n) {
    Json row;
    row["n"] = n;
    Json coeffs = Json::object();
    for (const auto& [i, v] : b.rows[n]) coeffs[std::to_string(i)] = to_string(v);
    row["coeffs"] = coeffs;
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j;
}

// {"coords": [["0", "0"], ["1/3", "0"], ...]}
inline std::vector<std::vector<Rational>> coords_from_json(const Json& j) {
  if (!j.contains("coords")) throw FormatError("points file needs \"coords\"");
  std::vector<std::vector<Rational>> coords;
  for (const auto& row : j.at("coords")) {
    std::vector<Rational> c;
    for (const auto& v : row) c.push_back(rational_field(v));
    coords.push_back(std::move(c));
  }
  return coords;
}

}  // namespace tcs
