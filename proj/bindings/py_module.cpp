// Python bindings: thin JSON-string adapters over the C++ core. Exact
// rationals cross the boundary as "p/q" strings.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tcs/accept.hpp"
#include "tcs/hyperbolic.hpp"
#include "tcs/json_io.hpp"
#include "tcs/laakso.hpp"
#include "tcs/search.hpp"
#include "tcs/treeprob.hpp"

namespace py = pybind11;

namespace {

using tcs::Json;
using tcs::Rational;

tcs::FiniteMetricSpace<Rational> parse_space(const std::string& space_json) {
  return tcs::space_from_json(Json::parse(space_json));
}

tcs::TransportProblem<Rational> parse_mass(
    const tcs::FiniteMetricSpace<Rational>& space,
    const std::map<std::string, std::string>& mass) {
  std::map<std::string, Rational> by_label;
  for (const auto& [label, v] : mass) by_label[label] = tcs::parse_rational(v);
  return tcs::TransportProblem<Rational>::from_labels(space, by_label);
}

std::string optimal_cost_py(const std::string& space_json,
                            const std::map<std::string, std::string>& mass) {
  auto space = parse_space(space_json);
  return tcs::to_string(tcs::optimal_cost(space, parse_mass(space, mass)));
}

std::vector<std::tuple<std::string, std::string, std::string>> optimal_plan_py(
    const std::string& space_json,
    const std::map<std::string, std::string>& mass) {
  auto space = parse_space(space_json);
  auto plan = tcs::optimal_plan(space, parse_mass(space, mass));
  std::vector<std::tuple<std::string, std::string, std::string>> out;
  for (const auto& mv : plan.moves)
    out.emplace_back(tcs::to_string(mv.amount), space.points[mv.from],
                     space.points[mv.to]);
  return out;
}

std::vector<std::string> validate_metric_py(const std::string& space_json) {
  auto rep = tcs::validate_metric(parse_space(space_json));
  std::vector<std::string> out;
  for (const auto& v : rep.violations) out.push_back(v.describe());
  return out;
}

std::string basis_distortion_py(const std::string& space_json,
                                const std::string& basis_json, bool edges_only,
                                unsigned threads) {
  auto space = parse_space(space_json);
  auto basis = tcs::basis_from_json(Json::parse(basis_json), space);
  auto res = tcs::basis_distortion(basis, space, edges_only, threads);
  Json j;
  j["distortion"] = tcs::to_string(res.value);
  j["witness"] = {space.points[res.x], space.points[res.y]};
  return j.dump();
}

std::string pair_distortion_py(const std::string& space_json,
                               const std::string& basis_json,
                               const std::string& x, const std::string& y) {
  auto space = parse_space(space_json);
  auto basis = tcs::basis_from_json(Json::parse(basis_json), space);
  return tcs::to_string(
      tcs::pair_distortion(basis, space, space.index_of(x), space.index_of(y)));
}

std::vector<std::string> dual_coefficients_py(
    const std::string& space_json, const std::string& basis_json,
    const std::map<std::string, std::string>& mass) {
  auto space = parse_space(space_json);
  auto basis = tcs::basis_from_json(Json::parse(basis_json), space);
  auto coeffs = tcs::dual_coefficients(basis, parse_mass(space, mass));
  std::vector<std::string> out;
  for (int n = 1; n <= coeffs.count(); ++n)
    out.push_back(tcs::to_string(coeffs.coeffs[n]));
  return out;
}

std::string treeprob_report_py(const std::string& space_json,
                               const std::string& basis_json, int guard) {
  auto space = parse_space(space_json);
  auto basis = tcs::basis_from_json(Json::parse(basis_json), space);
  Json rows = Json::array();
  for (const auto& row :
       tcs::min_expected_distortion_report(basis, space, guard)) {
    rows.push_back({{"pair", {space.points[row.x], space.points[row.y]}},
                    {"d", tcs::to_string(row.d)},
                    {"pair_distortion", tcs::to_string(row.pair_distortion)},
                    {"E_effective", tcs::to_string(row.expectation_effective)},
                    {"E_product", tcs::to_string(row.expectation_product)},
                    {"pi_independent", row.product_independent},
                    {"effective_matches", row.effective_matches}});
  }
  return rows.dump();
}

std::string search_basis_py(const std::string& space_json, long budget,
                            unsigned long seed) {
  auto space = parse_space(space_json);
  auto res = tcs::search_basis(space, budget, seed);
  Json j = tcs::basis_to_json(res.basis, space);
  j["score"] = tcs::to_string(res.score);
  return j.dump();
}

std::string laakso_verify_py(int k, bool full_pairs, unsigned threads, int guard) {
  auto rep = tcs::verify_laakso_bound(k, full_pairs, threads, guard);
  Json j;
  j["k"] = rep.k;
  j["vertices"] = rep.n_vertices;
  j["distortion"] = tcs::to_string(rep.distortion);
  j["bound"] = tcs::to_string(rep.bound);
  j["witness"] = {rep.witness_x, rep.witness_y};
  j["upper_ok"] = rep.upper_ok;
  j["lower_ok"] = rep.lower_ok;
  return j.dump();
}

std::string laakso_space_py(int k, int guard) {
  auto [graph, space] = tcs::build_laakso(k, guard);
  Json j = tcs::space_to_json(space);
  Json edges = Json::array();
  for (const auto& e : graph.final_edges()) edges.push_back({e[0], e[1], "1"});
  j["edges"] = edges;
  j.erase("dist");
  return j.dump();
}

std::string hyper_verify_py(const std::vector<std::vector<std::string>>& coords,
                            const std::string& metric, const std::string& lam,
                            const std::string& r, int k, unsigned threads) {
  std::vector<std::vector<Rational>> pts;
  std::vector<std::string> labels;
  for (size_t i = 0; i < coords.size(); ++i) {
    std::vector<Rational> row;
    for (const auto& c : coords[i]) row.push_back(tcs::parse_rational(c));
    pts.push_back(std::move(row));
    labels.push_back("p" + std::to_string(i));
  }
  auto space = tcs::lp_space(pts, labels, metric == "linf");
  auto h = tcs::build_hyperbolic(space, tcs::parse_rational(lam),
                                 tcs::parse_rational(r), k);
  auto rep = tcs::verify_hyperbolic_bound(h, threads);
  Json j;
  j["vertices"] = h.num_vertices();
  j["distortion"] = tcs::to_string(rep.distortion);
  j["c_used"] = tcs::to_string(rep.c_used);
  j["bound"] = tcs::to_string(rep.bound);
  j["d_est"] = rep.d_est;
  j["pass"] = rep.pass;
  j["edges_ok"] = rep.edges_ok;
  j["induced_measure_ok"] = rep.induced_measure_ok;
  j["ball_identity_ok"] = rep.ball_identity_ok;
  j["doubling_ok"] = rep.doubling_ok;
  return j.dump();
}

std::string acceptance_py(unsigned long seed, bool quick) {
  tcs::AcceptanceOptions opts;
  opts.seed = seed;
  opts.quick = quick;
  Json rows = Json::array();
  for (const auto& r : tcs::run_acceptance(opts))
    rows.push_back({{"id", r.id},
                    {"name", r.name},
                    {"pass", r.pass},
                    {"details", Json::parse(r.details)}});
  return rows.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "exact computations in transportation cost spaces";

  py::register_exception<tcs::Error>(m, "TcsError");

  m.def("optimal_cost", &optimal_cost_py, py::arg("space_json"),
        py::arg("mass"),
        "Optimal transportation cost of a zero-sum measure; rationals as "
        "\"p/q\" strings.");
  m.def("optimal_plan", &optimal_plan_py, py::arg("space_json"), py::arg("mass"),
        "A witness plan of minimal cost as (amount, from, to) triples.");
  m.def("validate_metric", &validate_metric_py, py::arg("space_json"),
        "List of violated metric axioms (empty iff valid).");
  m.def("basis_distortion", &basis_distortion_py, py::arg("space_json"),
        py::arg("basis_json"), py::arg("edges_only") = false,
        py::arg("threads") = 0, "JSON with the distortion and a witness pair.");
  m.def("pair_distortion", &pair_distortion_py, py::arg("space_json"),
        py::arg("basis_json"), py::arg("x"), py::arg("y"));
  m.def("dual_coefficients", &dual_coefficients_py, py::arg("space_json"),
        py::arg("basis_json"), py::arg("mass"),
        "Coordinates b*_n(mu) for n = 1..N.");
  m.def("treeprob_report", &treeprob_report_py, py::arg("space_json"),
        py::arg("basis_json"), py::arg("guard") = 9,
        "Per-pair distortions and expectations as a JSON array.");
  m.def("search_basis", &search_basis_py, py::arg("space_json"),
        py::arg("budget") = 1000, py::arg("seed") = 20240921);
  m.def("laakso_verify", &laakso_verify_py, py::arg("k"),
        py::arg("full_pairs") = true, py::arg("threads") = 0,
        py::arg("guard") = 4);
  m.def("laakso_space", &laakso_space_py, py::arg("k"), py::arg("guard") = 4,
        "The Laakso graph as a space JSON (edge form).");
  m.def("hyper_verify", &hyper_verify_py, py::arg("coords"),
        py::arg("metric") = "l1", py::arg("lam") = "2", py::arg("r") = "1/8",
        py::arg("k") = 1, py::arg("threads") = 0);
  m.def("acceptance", &acceptance_py, py::arg("seed") = 20240921,
        py::arg("quick") = false, "Run the acceptance criteria suite.");
}
