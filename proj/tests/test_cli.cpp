#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "bcov/cli.hpp"
#include "json.hpp"

using namespace bcov;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream o, e;
  int c = run_cli(args, o, e);
  return {c, o.str(), e.str()};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage_errors_exit_2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"check", "fock", "--bounds", "1,2"}).code == 2);
  CHECK(run({"check", "qme", "--scales", "3/2"}).code == 2);
  CHECK(run({"validate", "--model", "/no/such/file.json"}).code == 2);
  CHECK(run({"validate", "--format", "yaml"}).code == 2);
}

TEST_CASE("help_and_version") {
  auto h = run({"--help"});
  CHECK(h.code == 0);
  CHECK(h.out.find("correlators") != std::string::npos);
  CHECK(run({"--version"}).out == std::string(kToolVersion) + "\n");
}

TEST_CASE("validate_json_report") {
  auto r = run({"validate", "--model", "fourier-torus", "--format", "json"});
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["summary"]["fail"] == 0);
  CHECK(j["tool_version"] == kToolVersion);
  CHECK(j["model_hash"].get<std::string>().size() > 8);
}

TEST_CASE("classical_table_has_value_two") {
  auto r = run({"classical", "table", "--model", "elliptic-cohomology", "--n", "5"});
  CHECK(r.code == 0);
  CHECK(r.out.find("k=(0,0,1,1,0) multinomial 2 trace 1 value 2") != std::string::npos);
}

TEST_CASE("check_all_elliptic_passes") {
  auto r = run({"check", "all", "--model", "elliptic-cohomology", "--bounds", "2,6,3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("0 fail") != std::string::npos);
}

TEST_CASE("truncation_underflow_exit_3") {
  auto r = run({"quantize", "solve", "--model", "fourier-torus", "--bounds", "1,4,2"});
  CHECK(r.code == 3);
  CHECK(r.err.find("truncation underflow") == 0);
}

TEST_CASE("flow_then_quantize_check") {
  std::string path = "cli_flow_test.json";
  auto f = run({"flow", "--model", "fourier-torus", "--bounds", "0,5,3", "--to-q", "1/2", "--out", path});
  REQUIRE(f.code == 0);
  auto ok = run({"quantize", "check", "--model", "fourier-torus", "--bounds", "0,5,3", "--theory", path, "--q", "1/2"});
  CHECK(ok.code == 0);
  // checking the flowed theory at the wrong scale fails
  auto bad = run({"quantize", "check", "--model", "fourier-torus", "--bounds", "0,5,3", "--theory", path, "--q", "1"});
  CHECK(bad.code == 1);
  std::remove(path.c_str());
}

TEST_CASE("correlators_default_and_bad_polarization") {
  auto r = run({"correlators", "--model", "elliptic-cohomology", "--bounds", "0,3,1", "--g-max", "0", "--n-max", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("g=0 [1@0 theta@0 eta@0] 1") != std::string::npos);
  std::string pol = "cli_pol_test.json";
  std::ofstream(pol) << R"({"phi": [["theta_eta", -1, "theta", 0, "1"]]})";
  auto b = run({"correlators", "--model", "elliptic-cohomology", "--bounds", "0,3,1", "--polarization", pol});
  CHECK(b.code == 2);
  std::remove(pol.c_str());
}

TEST_CASE("solve_reports_dimensions") {
  auto r = run({"quantize", "solve", "--model", "elliptic-cohomology", "--bounds", "1,4,2", "--constraints", "dilaton",
                "--format", "json"});
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  bool dim = false;
  for (auto& i : j["info"]) dim = dim || i["key"] == "solution dim";
  CHECK(dim);
}

}
