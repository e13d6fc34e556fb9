// tcs: transportation cost spaces over finite metric spaces.
//
// Subcommands: metric validate, oc, basis distortion, basis search, treeprob,
// laakso, hyper, reproduce. Exit codes: 0 success / all verifications passed,
// 1 verification failure, 2 input or parameter errors (JSON payload on
// stderr).

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "tcs/accept.hpp"
#include "tcs/hyperbolic.hpp"
#include "tcs/json_io.hpp"
#include "tcs/laakso.hpp"
#include "tcs/search.hpp"
#include "tcs/treeprob.hpp"

namespace {

using tcs::Json;
using tcs::Rational;

int guard_n() {
  if (const char* g = std::getenv("TCS_GUARD_N")) return std::atoi(g);
  return tcs::tree_guard_default();
}
int guard_k() {
  if (const char* g = std::getenv("TCS_GUARD_K")) return std::atoi(g);
  return tcs::laakso_guard_default();
}

void emit(const Json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    out << j.dump(2) << "\n";
  }
}

std::pair<int, int> parse_pair(const std::string& spec,
                               const tcs::FiniteMetricSpace<Rational>& space) {
  auto comma = spec.find(',');
  if (comma == std::string::npos)
    throw tcs::FormatError("--pair wants two comma-separated labels");
  return {space.index_of(spec.substr(0, comma)),
          space.index_of(spec.substr(comma + 1))};
}

Json plan_json(const tcs::TransportPlan<Rational>& plan,
               const tcs::FiniteMetricSpace<Rational>& space) {
  Json moves = Json::array();
  for (const auto& mv : plan.moves)
    moves.push_back({tcs::to_string(mv.amount), space.points[mv.from],
                     space.points[mv.to]});
  return moves;
}

int cmd_metric_validate(const std::string& space_path, const std::string& out) {
  auto space = tcs::space_from_json(tcs::load_json_file(space_path));
  auto rep = tcs::validate_metric(space);
  Json j;
  j["valid"] = rep.ok();
  Json v = Json::array();
  for (const auto& viol : rep.violations) v.push_back(viol.describe());
  j["violations"] = v;
  emit(j, out);
  return rep.ok() ? 0 : 1;
}

int cmd_oc(const std::string& space_path, const std::string& mu_path,
           const std::string& out) {
  auto space = tcs::space_from_json(tcs::load_json_file(space_path));
  auto mu = tcs::mu_from_json(tcs::load_json_file(mu_path), space);
  auto plan = tcs::optimal_plan(space, mu);
  Json j;
  j["cost"] = tcs::to_string(plan.cost(space));
  j["plan"] = plan_json(plan, space);
  emit(j, out);
  return 0;
}

int cmd_basis_distortion(const std::string& space_path,
                         const std::string& basis_path, const std::string& pair,
                         bool edges_only, const std::string& dump_csv,
                         unsigned threads, const std::string& out) {
  auto space = tcs::space_from_json(tcs::load_json_file(space_path));
  auto basis = tcs::basis_from_json(tcs::load_json_file(basis_path), space);
  Json j;
  if (!pair.empty()) {
    auto [x, y] = parse_pair(pair, space);
    j["pair"] = {space.points[x], space.points[y]};
    j["pair_distortion"] = tcs::to_string(tcs::pair_distortion(basis, space, x, y));
    emit(j, out);
    return 0;
  }
  auto res = tcs::basis_distortion(basis, space, edges_only, threads);
  j["distortion"] = tcs::to_string(res.value);
  j["witness"] = {space.points[res.x], space.points[res.y]};
  j["edges_only"] = edges_only;
  if (!dump_csv.empty()) {
    std::ofstream csv(dump_csv);
    csv << "x,y,d,pair_distortion\n";
    for (int px = 1; px <= basis.count(); ++px)
      for (int py = 0; py < px; ++py) {
        int x = basis.order.to_point[px], y = basis.order.to_point[py];
        csv << space.points[x] << "," << space.points[y] << ","
            << tcs::to_string(space.d(x, y)) << ","
            << tcs::to_string(tcs::pair_distortion(basis, space, x, y)) << "\n";
      }
    j["dump"] = dump_csv;
  }
  emit(j, out);
  return 0;
}

int cmd_basis_search(const std::string& space_path, long budget,
                     unsigned long seed, const std::string& out) {
  auto space = tcs::space_from_json(tcs::load_json_file(space_path));
  auto res = tcs::search_basis(space, budget, seed);
  Json j = tcs::basis_to_json(res.basis, space);
  j["score"] = tcs::to_string(res.score);
  j["seed"] = seed;
  j["evaluations"] = res.evaluations;
  emit(j, out);
  return 0;
}

int cmd_treeprob(const std::string& space_path, const std::string& basis_path,
                 const std::string& pair, const std::string& mode,
                 const std::string& report_csv, const std::string& out) {
  auto space = tcs::space_from_json(tcs::load_json_file(space_path));
  auto basis = tcs::basis_from_json(tcs::load_json_file(basis_path), space);
  const int guard = guard_n();

  if (!pair.empty()) {
    auto [x, y] = parse_pair(pair, space);
    int px = basis.order.to_pos[x], py = basis.order.to_pos[y];
    Json j;
    j["pair"] = {space.points[x], space.points[y]};
    j["d"] = tcs::to_string(space.d(x, y));
    j["pair_distortion"] =
        tcs::to_string(tcs::pair_distortion(basis, space, x, y));
    if (mode == "paths") {
      auto [expectation, mass] =
          tcs::effective_expectation_paths(basis, space, px, py);
      j["E_effective"] = tcs::to_string(expectation);
      j["path_mass"] = tcs::to_string(mass);
    } else {
      auto [eff, st] = tcs::effective_charge(basis, px, py, guard, false);
      j["E_effective"] =
          tcs::to_string(tcs::expected_distortion(eff, space, px, py));
      auto pi = tcs::product_probability(basis, guard);
      j["E_product"] = tcs::to_string(tcs::expected_distortion(pi, space, px, py));
      j["pi_independent"] = tcs::check_independent(pi, px, py);
      j["effective_support"] = eff.prob.size();
    }
    emit(j, out);
    return 0;
  }

  auto rows = tcs::min_expected_distortion_report(basis, space, guard);
  Json j = Json::array();
  std::ofstream csv;
  if (!report_csv.empty()) {
    csv.open(report_csv);
    csv << "pair,d,pair_distortion,E_effective,E_product,pi_independent\n";
  }
  bool all_match = true;
  for (const auto& row : rows) {
    Json r;
    r["pair"] = {space.points[row.x], space.points[row.y]};
    r["d"] = tcs::to_string(row.d);
    r["pair_distortion"] = tcs::to_string(row.pair_distortion);
    r["E_effective"] = tcs::to_string(row.expectation_effective);
    r["E_product"] = tcs::to_string(row.expectation_product);
    r["pi_independent"] = row.product_independent;
    r["effective_matches"] = row.effective_matches;
    all_match = all_match && row.effective_matches;
    j.push_back(r);
    if (csv.is_open())
      csv << space.points[row.x] << "|" << space.points[row.y] << ","
          << tcs::to_string(row.d) << "," << tcs::to_string(row.pair_distortion)
          << "," << tcs::to_string(row.expectation_effective) << ","
          << tcs::to_string(row.expectation_product) << ","
          << (row.product_independent ? "1" : "0") << "\n";
  }
  emit(j, out);
  return all_match ? 0 : 1;
}

int cmd_laakso(int k, bool full_pairs_flag, bool edges_only_flag,
               unsigned threads, const std::string& out,
               const std::string& export_path) {
  if (!export_path.empty()) {
    auto [graph, space] = tcs::build_laakso(k, guard_k());
    Json j;
    j["points"] = space.points;
    j["basepoint"] = 0;
    Json edges = Json::array();
    for (const auto& e : graph.final_edges()) edges.push_back({e[0], e[1], "1"});
    j["edges"] = edges;
    std::ofstream exp(export_path);
    exp << j.dump(2) << "\n";
  }
  bool full = k <= 3;
  if (full_pairs_flag) full = true;
  if (edges_only_flag) full = false;
  auto rep = tcs::verify_laakso_bound(k, full, threads, guard_k());
  Json j;
  j["k"] = rep.k;
  j["vertices"] = rep.n_vertices;
  j["edges_only"] = rep.edges_only;
  j["distortion"] = tcs::to_string(rep.distortion);
  j["bound"] = tcs::to_string(rep.bound);
  j["lower_bound"] = tcs::to_string(rep.lower_bound);
  j["witness"] = {rep.witness_x, rep.witness_y};
  j["upper_ok"] = rep.upper_ok;
  j["lower_ok"] = rep.lower_ok;
  emit(j, out);
  return rep.upper_ok && rep.lower_ok ? 0 : 1;
}

int cmd_hyper(const std::string& points_path, const std::string& metric,
              const std::string& lambda_s, const std::string& r_s, int k,
              unsigned threads, const std::string& out) {
  Json input = tcs::load_json_file(points_path);
  tcs::FiniteMetricSpace<Rational> space;
  if (metric == "matrix") {
    space = tcs::space_from_json(input);
  } else {
    auto coords = tcs::coords_from_json(input);
    std::vector<std::string> labels;
    if (input.contains("labels"))
      labels = input.at("labels").get<std::vector<std::string>>();
    else
      for (size_t i = 0; i < coords.size(); ++i)
        labels.push_back("p" + std::to_string(i));
    space = tcs::lp_space(coords, labels, metric == "linf");
  }
  auto h = tcs::build_hyperbolic(space, tcs::parse_rational(lambda_s),
                                 tcs::parse_rational(r_s), k);
  auto rep = tcs::verify_hyperbolic_bound(h, threads);
  Json j;
  j["vertices"] = h.num_vertices();
  Json layers = Json::array();
  for (const auto& layer : h.layers) layers.push_back(layer.size());
  j["layer_sizes"] = layers;
  j["distortion"] = tcs::to_string(rep.distortion);
  j["c_used"] = tcs::to_string(rep.c_used);
  j["bound"] = tcs::to_string(rep.bound);
  j["d_est"] = rep.d_est;
  j["bound_via_doubling"] = rep.bound_via_doubling;
  j["witness"] = {rep.witness_x, rep.witness_y};
  j["pass"] = rep.pass;
  j["edges_ok"] = rep.edges_ok;
  j["induced_measure_ok"] = rep.induced_measure_ok;
  j["ball_identity_ok"] = rep.ball_identity_ok;
  j["doubling_ok"] = rep.doubling_ok;
  emit(j, out);
  return rep.pass && rep.edges_ok && rep.induced_measure_ok && rep.ball_identity_ok ? 0 : 1;
}

int cmd_reproduce(const std::string& out_dir, bool quick, unsigned long seed,
                  unsigned threads) {
  tcs::AcceptanceOptions opts;
  opts.seed = seed;
  opts.quick = quick;
  opts.threads = threads;
  opts.tree_guard = guard_n();
  opts.laakso_guard = guard_k();
  auto results = tcs::run_acceptance(opts);

  std::filesystem::create_directories(out_dir);
  Json summary = Json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    Json j;
    j["id"] = r.id;
    j["name"] = r.name;
    j["pass"] = r.pass;
    j["seed"] = seed;
    j["details"] = Json::parse(r.details);
    char name[64];
    std::snprintf(name, sizeof(name), "criterion_%02d.json", r.id);
    std::ofstream out(std::filesystem::path(out_dir) / name);
    out << j.dump(2) << "\n";
    summary.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}});
    std::cout << (r.pass ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name
              << "\n";
  }
  Json top;
  top["seed"] = seed;
  top["quick"] = quick;
  top["all_pass"] = all;
  top["criteria"] = summary;
  std::ofstream out(std::filesystem::path(out_dir) / "summary.json");
  out << top.dump(2) << "\n";
  std::cout << (all ? "all criteria passed" : "FAILURES PRESENT") << "\n";
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact computations in transportation cost spaces"};
  app.require_subcommand(1);

  std::string space_path, mu_path, basis_path, points_path, out_path, export_path;
  std::string pair, dump_csv, report_csv, mode = "enumerate";
  std::string metric = "l1", lambda_s = "2", r_s = "1/8";
  bool edges_only = false, full_pairs = false, quick = false;
  int k = 1;
  long budget = 1000;
  unsigned long seed = 20240921;
  unsigned threads = 0;
  std::string out_dir = "reports";

  auto* metric_cmd = app.add_subcommand("metric", "metric-space utilities");
  auto* validate = metric_cmd->add_subcommand("validate", "check metric axioms");
  validate->add_option("--space", space_path, "space JSON")->required();
  validate->add_option("--out", out_path, "output file");

  auto* oc = app.add_subcommand("oc", "optimal transportation cost");
  oc->add_option("--space", space_path, "space JSON")->required();
  oc->add_option("--mu", mu_path, "measure JSON")->required();
  oc->add_option("--out", out_path, "output file");

  auto* basis_cmd = app.add_subcommand("basis", "stochastic basis operations");
  auto* distortion = basis_cmd->add_subcommand("distortion", "l1 distortion");
  distortion->add_option("--space", space_path, "space JSON")->required();
  distortion->add_option("--basis", basis_path, "basis JSON")->required();
  distortion->add_option("--pair", pair, "single pair x,y (labels)");
  distortion->add_flag("--edges-only", edges_only, "only graph edges");
  distortion->add_option("--dump", dump_csv, "per-pair CSV");
  distortion->add_option("--threads", threads, "parallelism degree");
  distortion->add_option("--out", out_path, "output file");
  auto* search = basis_cmd->add_subcommand("search", "local-search heuristic");
  search->add_option("--space", space_path, "space JSON")->required();
  search->add_option("--budget", budget, "candidate evaluations");
  search->add_option("--seed", seed, "random seed");
  search->add_option("--out", out_path, "output file");

  auto* treeprob = app.add_subcommand("treeprob", "tree probabilities");
  treeprob->add_option("--space", space_path, "space JSON")->required();
  treeprob->add_option("--basis", basis_path, "basis JSON")->required();
  treeprob->add_option("--pair", pair, "single pair x,y (labels)");
  treeprob->add_option("--mode", mode, "enumerate|paths")
      ->check(CLI::IsMember({"enumerate", "paths"}));
  treeprob->add_option("--report", report_csv, "per-pair CSV report");
  treeprob->add_option("--out", out_path, "output file");

  auto* laakso = app.add_subcommand("laakso", "Laakso graph verification");
  laakso->add_option("--k", k, "generation")->required();
  laakso->add_flag("--full-pairs", full_pairs, "force the full pair sweep");
  laakso->add_flag("--edges-only", edges_only, "restrict to graph edges");
  laakso->add_option("--threads", threads, "parallelism degree");
  laakso->add_option("--export", export_path, "write the graph as a space JSON");
  laakso->add_option("--out", out_path, "output file");

  auto* hyper = app.add_subcommand("hyper", "hyperbolic approximation");
  hyper->add_option("--points", points_path, "points JSON")->required();
  hyper->add_option("--metric", metric, "l1|linf|matrix")
      ->check(CLI::IsMember({"l1", "linf", "matrix"}));
  hyper->add_option("--lambda", lambda_s, "lambda >= 2");
  hyper->add_option("--r", r_s, "r in (0, 1/6)");
  hyper->add_option("--k", k, "layer range");
  hyper->add_option("--threads", threads, "parallelism degree");
  hyper->add_option("--out", out_path, "output file");

  auto* reproduce = app.add_subcommand("reproduce", "run the acceptance suite");
  reproduce->add_option("--out", out_dir, "report directory");
  reproduce->add_flag("--quick", quick, "skip the Laakso k=3 full sweep");
  reproduce->add_option("--seed", seed, "random seed");
  reproduce->add_option("--threads", threads, "parallelism degree");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_metric_validate(space_path, out_path);
    if (*oc) return cmd_oc(space_path, mu_path, out_path);
    if (*distortion)
      return cmd_basis_distortion(space_path, basis_path, pair, edges_only,
                                  dump_csv, threads, out_path);
    if (*search) return cmd_basis_search(space_path, budget, seed, out_path);
    if (*treeprob)
      return cmd_treeprob(space_path, basis_path, pair, mode, report_csv,
                          out_path);
    if (*laakso)
      return cmd_laakso(k, full_pairs, edges_only, threads, out_path,
                        export_path);
    if (*hyper)
      return cmd_hyper(points_path, metric, lambda_s, r_s, k, threads, out_path);
    if (*reproduce) return cmd_reproduce(out_dir, quick, seed, threads);
  } catch (const tcs::Error& e) {
    tcs::Json err;
    err["error"] = {{"kind", e.kind()}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    tcs::Json err;
    err["error"] = {{"kind", "Unexpected"}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 2;
  }
  return 0;
}
