#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "netbound/cli.hpp"

using namespace netbound;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const acceptance::Oracles& oracles = acceptance::Oracles()) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err, oracles);
  return {code, out.str(), err.str()};
}

bool has_line(const std::string& text, const std::string& line) {
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);)
    if (l == line) return true;
  return false;
}

std::string data(const char* name) { return std::string(NETBOUND_DATA_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / ("netbound_test_" + name);
  std::ofstream(path) << contents;
  return path.string();
}

}  // namespace

TEST_CASE("channel command") {
  auto r = run({"channel", "--kind", "amplitude_damping", "--param", "0.5"});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "e_max(sdp)=0.584963"));
  CHECK(has_line(r.out, "choi_simulable=false"));

  r = run({"channel", "--kind", "dephasing", "--param", "0.0"});
  CHECK(has_line(r.out, "e_r=1.000000"));

  // 0.35457890... rounds to 0.354579 at six decimals.
  r = run({"channel", "--kind", "dephasing", "--param", "0.5"});
  CHECK(has_line(r.out, "e_sq_ub=0.354579"));
  CHECK(has_line(r.out, "e_r=0.188722"));
  CHECK(has_line(r.out, "choi_simulable=true"));
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"channel", "--kind", "dephasing"}).code == 2);
  CHECK(run({"channel", "--kind", "nope", "--param", "0.5"}).code == 2);
  CHECK(run({"channel", "--kind", "dephasing", "--param", "1.5"}).code == 2);
  CHECK(run({"channel", "--kind", "dephasing", "--param", "abc"}).code == 2);
  CHECK(run({"emax", "--kind", "dephasing", "--param", "0.5", "--method", "guess"}).code == 2);
  CHECK(run({"channel", "--kind", "custom", "--param", "0.5"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("emax command") {
  auto r = run({"emax", "--kind", "amplitude_damping", "--param", "0.5", "--method", "closed"});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "e_max(closed_form)=0.584963"));

  r = run({"emax", "--kind", "amplitude_damping", "--param", "0.3"});
  CHECK(has_line(r.out, "e_max(sdp)=0.765535"));
  CHECK(has_line(r.out, "e_max_lower(sdp)=0.754169"));

  r = run({"emax", "--kind", "dephasing", "--param", "0.5", "--method", "closed"});
  CHECK(r.code == 3);

  r = run({"emax", "--kind", "erasure", "--param", "0.5", "--method", "reduced"});
  CHECK(r.code == 2);
}

TEST_CASE("network command") {
  auto r = run({"network", "--file", data("chain.json")});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::ordered_json::parse(r.out);
  CHECK(doc.begin().key() == "epsilon");
  REQUIRE(doc["cuts"].size() == 2);
  const auto& first = doc["cuts"][0];
  CHECK(first["c_a"].empty());
  CHECK(first["e_versatile"].get<double>() == doctest::Approx(0.377444).epsilon(1e-6));
  // epsilon = 0: the versatile ebit bound is the cut value itself.
  CHECK(first["ebit_bounds"]["er_versatile"].get<double>() == first["e_versatile"].get<double>());
  CHECK(doc["cuts"][1]["e_r"].is_null());
  CHECK(run({"network", "--file", data("chain.json")}).out == r.out);

  r = run({"network", "--file", data("chain.json"), "--min-cut"});
  const auto best = nlohmann::json::parse(r.out);
  CHECK_FALSE(best.contains("cuts"));
  CHECK(best["min_cut"]["c_a"].empty());
  CHECK(best["min_cut"]["e_versatile"].get<double>() == doctest::Approx(0.377444).epsilon(1e-6));

  r = run({"network", "--file", data("chain.json"), "--min-cut", "--maxflow", "--epsilon", "0.2"});
  CHECK(r.code == 0);
  const auto inf = nlohmann::json::parse(r.out);
  CHECK(inf["epsilon"] == 0.2);
  CHECK(inf["min_cut"]["ebit_bounds"]["er_versatile"] == "inf");

  CHECK(run({"network", "--file", data("chain.json"), "--exhaustive", "--maxflow"}).code == 2);
  CHECK(run({"network", "--file", data("chain.json"), "--epsilon", "1.5"}).code == 2);
  CHECK(run({"network", "--file", data("missing.json")}).code == 2);
  CHECK(run({"network", "--file", temp_file("bad.json", R"({"epsilon": 0, "nodes": [], "edgez": []})")}).code == 2);

  const auto missing = temp_file("missing_measure.json", R"({"epsilon": 0, "nodes": ["A", "C", "B"], "edges": [
      {"from": "A", "to": "C", "avg_uses": 1, "channel": {"kind": "dephasing", "param": 0.2}},
      {"from": "C", "to": "B", "avg_uses": 1,
       "channel": {"kind": "custom", "choi_simulable": false,
                   "kraus": [[[1, 0], [0, 1], [0, 0], [0, 0]]]}}]})");
  r = run({"network", "--file", missing});
  CHECK(r.code == 3);
  CHECK(r.err.find("edge 1") != std::string::npos);
}

TEST_CASE("diamond network with custom channel") {
  const auto r = run({"network", "--file", data("diamond.json"), "--min-cut"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["epsilon"] == 0.05);
  CHECK(doc["min_cut"]["e_versatile"].is_number());
}

TEST_CASE("sweep command") {
  auto r = run({"sweep", "--k", "1,5", "--grid", "11"});
  CHECK(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 1 + 2 * 121);
  CHECK(r.out.rfind("k,x,lambda,mu\n1,0,0,0\n", 0) == 0);
  CHECK(run({"sweep", "--k", "1,5", "--grid", "11"}).out == r.out);

  const auto path = (std::filesystem::temp_directory_path() / "netbound_test_sweep.csv").string();
  CHECK(run({"sweep", "--k", "1,5", "--grid", "11", "--output", path}).code == 0);
  std::ifstream in(path, std::ios::binary);
  std::stringstream written;
  written << in.rdbuf();
  CHECK(written.str() == r.out);

  CHECK(run({"sweep", "--k", "1,x"}).code == 2);
  CHECK(run({"sweep", "--k", "0"}).code == 2);
  CHECK(run({"sweep", "--grid", "1"}).code == 2);
  CHECK(run({"sweep", "--grid", "2", "--output", "/nonexistent/dir/out.csv"}).code == 2);

  r = run({"sweep", "--k", "1", "--grid", "3", "--sdp-check"});
  CHECK(r.code == 0);
  CHECK(r.err.find("sdp_check points=25") != std::string::npos);
}

TEST_CASE("verify command") {
  auto r = run({"verify", "--checks", "6,7,10"});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS [6]") != std::string::npos);
  CHECK(r.out.find("3/3 checks passed") != std::string::npos);

  acceptance::Oracles tampered;
  tampered.mu_half_one = 0.4;
  r = run({"verify", "--checks", "6,10"}, tampered);
  CHECK(r.code == 1);
  CHECK(r.out.find("FAIL [6] mu sweep") != std::string::npos);
  CHECK(r.out.find("PASS [10]") != std::string::npos);

  acceptance::Oracles wrong_formula;
  wrong_formula.ad_emax = [](double l) { return std::log2(2.0 - l) + 0.01; };
  r = run({"verify", "--checks", "1"}, wrong_formula);
  CHECK(r.code == 1);
  CHECK(r.out.find("FAIL [1] amplitude damping") != std::string::npos);

  CHECK(run({"verify", "--checks", "11"}).code == 2);
}
