#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "tcs/json_io.hpp"

using namespace tcs;

namespace {

struct CliRun {
  int exit_code;
  std::string out;
};

// Runs the CLI binary named by TCS_CLI_BIN; cases are skipped when unset.
const char* cli_bin() { return std::getenv("TCS_CLI_BIN"); }

CliRun run_cli(const std::string& args) {
  std::string cmd = std::string(cli_bin()) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (size_t got = fread(buf, 1, sizeof(buf), pipe)) out.append(buf, got);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string write_temp(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / ("tcs_test_" + name);
  std::ofstream out(path);
  out << content;
  return path.string();
}

}  // namespace

TEST_SUITE("io_cli") {

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/4") == make_ratio(3, 4));
  CHECK(parse_rational("-6/8") == make_ratio(-3, 4));
  CHECK(parse_rational("5") == 5);
  CHECK(parse_rational("0.5") == make_ratio(1, 2));
  CHECK(parse_rational("-0.25") == make_ratio(-1, 4));
  CHECK(to_string(make_ratio(4, 6)) == "2/3");
  CHECK(to_string(Rational(7)) == "7");
  CHECK_THROWS_AS(parse_rational("x"), FormatError);
  CHECK_THROWS_AS(parse_rational(""), FormatError);
  CHECK_THROWS_AS(parse_rational("1/2.5"), FormatError);
}

TEST_CASE("space JSON: edges and matrix forms") {
  Json j = Json::parse(R"({
    "points": ["a", "b", "c"],
    "edges": [[0, 1, "1/2"], [1, 2, "2"]],
    "basepoint": 1
  })");
  auto m = space_from_json(j);
  CHECK(m.points == std::vector<std::string>({"b", "a", "c"}));
  CHECK(m.d(0, 1) == make_ratio(1, 2));
  CHECK(m.d(0, 2) == 2);
  CHECK(m.d(1, 2) == make_ratio(5, 2));

  auto round = space_from_json(space_to_json(m));
  CHECK(round.dist == m.dist);
  CHECK(round.points == m.points);

  Json bad = Json::parse(R"({"points": ["a"], "dist": [["0", "1"]]})");
  CHECK_THROWS_AS(space_from_json(bad), FormatError);

  Json matrix = Json::parse(R"({
    "points": ["a", "b"],
    "dist": [["0", "3"], ["3", "0"]],
    "basepoint": 1
  })");
  auto mm = space_from_json(matrix);
  CHECK(mm.points[0] == "b");
  CHECK(mm.d(0, 1) == 3);
}

TEST_CASE("measure and basis JSON") {
  auto m = test::five_point_space();
  Json j = Json::parse(R"({"mass": {"4": "1", "3": "-1"}})");
  auto mu = mu_from_json(j, m);
  CHECK(mu.at(4) == 1);
  CHECK(mu.at(3) == -1);
  CHECK(mu.at(0) == 0);

  Json unknown = Json::parse(R"({"mass": {"zz": "1"}})");
  CHECK_THROWS_AS(mu_from_json(unknown, m), UnknownPoint);

  auto b = test::five_point_basis();
  auto round = basis_from_json(basis_to_json(b, m), m);
  CHECK(round.order.to_point == b.order.to_point);
  for (int n = 1; n <= 4; ++n) CHECK(round.rows[n] == b.rows[n]);

  Json missing = basis_to_json(b, m);
  missing["rows"].erase(2);
  CHECK_THROWS_AS(basis_from_json(missing, m), FormatError);

  Json lopsided = basis_to_json(b, m);
  lopsided["rows"][2]["coeffs"]["1"] = "1/3";
  CHECK_THROWS_AS(basis_from_json(lopsided, m), ParameterOutOfRange);

  // explicit zeros are dropped so molecular rows stay recognisable
  Json padded = basis_to_json(b, m);
  padded["rows"][0]["coeffs"]["3"] = "0";
  auto parsed = basis_from_json(padded, m);
  CHECK(parsed.rows[1].size() == 1);
}

TEST_CASE("cli round trips" * doctest::skip(cli_bin() == nullptr)) {
  auto m = test::five_point_space();
  auto b = test::five_point_basis();
  std::string space = write_temp("space.json", space_to_json(m).dump());
  std::string basis = write_temp("basis.json", basis_to_json(b, m).dump());
  std::string mu = write_temp("mu.json", R"({"mass": {"4": "1", "3": "-1"}})");

  SUBCASE("oc emits the molecule cost") {
    auto res = run_cli("oc --space " + space + " --mu " + mu);
    CHECK(res.exit_code == 0);
    auto j = Json::parse(res.out);
    CHECK(j.at("cost").get<std::string>() == "1");
    CHECK(j.at("plan").size() == 1);
  }
  SUBCASE("basis distortion") {
    auto res = run_cli("basis distortion --space " + space + " --basis " + basis);
    CHECK(res.exit_code == 0);
    CHECK(Json::parse(res.out).at("distortion").get<std::string>() == "2");
  }
  SUBCASE("treeprob full report") {
    auto res = run_cli("treeprob --space " + space + " --basis " + basis);
    CHECK(res.exit_code == 0);
    auto j = Json::parse(res.out);
    CHECK(j.size() == 10);  // all pairs of five points
  }
  SUBCASE("malformed input exits with code 2") {
    std::string bad = write_temp("bad.json", "{broken");
    auto res = run_cli("oc --space " + bad + " --mu " + mu);
    CHECK(res.exit_code == 2);
  }
  SUBCASE("validate flags violations with exit 1") {
    std::string skewed = write_temp("skewed.json", R"({
      "points": ["a", "b", "c"],
      "dist": [["0","1","5"],["1","0","1"],["5","1","0"]]
    })");
    auto res = run_cli("metric validate --space " + skewed);
    CHECK(res.exit_code == 1);
    CHECK(!Json::parse(res.out).at("valid").get<bool>());
  }
  SUBCASE("laakso subcommand") {
    auto res = run_cli("laakso --k 1");
    CHECK(res.exit_code == 0);
    auto j = Json::parse(res.out);
    CHECK(j.at("distortion").get<std::string>() == "7");
    CHECK(j.at("upper_ok").get<bool>());
  }
  SUBCASE("identical inputs and seeds give identical outputs") {
    auto a = run_cli("basis search --space " + space + " --budget 150 --seed 9");
    auto b = run_cli("basis search --space " + space + " --budget 150 --seed 9");
    CHECK(a.out == b.out);
    auto c = run_cli("treeprob --space " + space + " --basis " + basis);
    auto d = run_cli("treeprob --space " + space + " --basis " + basis);
    CHECK(c.out == d.out);
  }
}

}  // TEST_SUITE
