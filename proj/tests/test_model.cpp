#include "doctest.h"

#include <fstream>
#include <sstream>

#include "bcov/model.hpp"
#include "json.hpp"

using namespace bcov;

namespace {

std::string read_file(const std::string& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Lambda(e) with e odd
nlohmann::json tiny() {
  return nlohmann::json::parse(R"({
    "name": "tiny",
    "basis": [{"label": "1", "degree": 0, "hodge_weight": "0"},
              {"label": "e", "degree": 1, "hodge_weight": "0"}],
    "dim_x": 1, "unit": "1",
    "product": [["1","1","1","1"], ["1","e","e","1"], ["e","1","e","1"]],
    "trace": [["e", "1"]]
  })");
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("builtins_validate") {
  CHECK(validate_dgbv(builtin_elliptic_cohomology()).all_pass());
  CHECK(validate_dgbv(builtin_fourier_torus(1)).all_pass());
  CHECK(validate_dgbv(builtin_fourier_torus(1, 2)).all_pass());
}

TEST_CASE("tiny_model_loads") {
  DGBVModel m = load_model(tiny().dump());
  CHECK(m.dim() == 2);
  CHECK(m.pairing(0, 1) == 1);
  CHECK(m.pairing(1, 0) == 1);
  CHECK(m.pairing(0, 0) == 0);
}

TEST_CASE("schema_errors_carry_path") {
  auto j = tiny();
  j["product"][1][1] = "zz";
  try {
    load_model(j.dump());
    FAIL("accepted unknown label");
  } catch (const ModelError& e) {
    CHECK(std::string(e.what()).find("unknown basis label") != std::string::npos);
    CHECK(e.path == "product[1][1]");
  }
  auto k = tiny();
  k.erase("trace");
  CHECK_THROWS_AS(load_model(k.dump()), ModelError);
  CHECK_THROWS_AS(load_model("{not json"), ModelError);
  auto w = tiny();
  w["metric"] = nlohmann::json::array({nlohmann::json::array({"1", "-1"})});
  CHECK_THROWS_WITH_AS(load_model(w.dump()), doctest::Contains("positive"), ModelError);
}

TEST_CASE("validation_rejects_degenerate_trace") {
  auto j = tiny();
  j["trace"] = nlohmann::json::array({nlohmann::json::array({"1", "1"})});
  CHECK_THROWS_WITH_AS(load_model(j.dump()), doctest::Contains("failed validation"), ModelError);
}

TEST_CASE("validation_rejects_wrong_commutativity_sign") {
  auto j = tiny();
  j["basis"].push_back({{"label", "f"}, {"degree", 1}, {"hodge_weight", "0"}});
  j["product"] = nlohmann::json::array({nlohmann::json::array({"1", "1", "1", "1"})});
  for (auto t : {"e", "f"}) {
    j["product"].push_back({"1", t, t, "1"});
    j["product"].push_back({t, "1", t, "1"});
  }
  j["basis"].push_back({{"label", "ef"}, {"degree", 2}, {"hodge_weight", "0"}});
  j["product"].push_back({"1", "ef", "ef", "1"});
  j["product"].push_back({"ef", "1", "ef", "1"});
  j["product"].push_back({"e", "f", "ef", "1"});
  j["product"].push_back({"f", "e", "ef", "1"});  // should be -1
  j["trace"] = nlohmann::json::array({nlohmann::json::array({"ef", "1"})});
  CHECK_THROWS_AS(load_model(j.dump()), ModelError);
  j["product"].back()[3] = "-1";
  CHECK_NOTHROW(load_model(j.dump()));
}

TEST_CASE("json_round_trip_and_hash") {
  for (auto m : {builtin_elliptic_cohomology(), builtin_fourier_torus(1)}) {
    std::string s = model_to_json(m);
    DGBVModel back = load_model(s);
    CHECK(model_to_json(back) == s);
    CHECK(model_hash(back) == model_hash(m));
  }
  CHECK(model_hash(builtin_fourier_torus(1)) != model_hash(builtin_fourier_torus(1, 2)));
}

TEST_CASE("shipped_model_files_match_builtins") {
  std::string dir = BCOV_MODEL_DIR;
  CHECK(model_hash(load_model(read_file(dir + "/elliptic-cohomology.json"))) ==
        model_hash(builtin_elliptic_cohomology()));
  CHECK(model_hash(load_model(read_file(dir + "/fourier-torus-1.json"))) == model_hash(builtin_fourier_torus(1)));
  DGBVModel s = resolve_model(dir + "/surface-d2.json");
  CHECK(s.dim() == 16);
  CHECK(s.dim_x == 2);
}

TEST_CASE("resolve_model_errors") {
  CHECK_THROWS_AS(resolve_model("fourier-torus:0"), ModelError);
  CHECK_THROWS_AS(resolve_model("/nonexistent/model.json"), ModelError);
  CHECK(resolve_model("fourier-torus:1").dim() == builtin_fourier_torus(1).dim());
}

TEST_CASE("hodge_harmonic_rank_equals_cohomology_rank") {
  for (auto m : {builtin_elliptic_cohomology(), builtin_fourier_torus(1), builtin_fourier_torus(2)}) {
    HodgeData h = hodge_data(m);
    CHECK(h.harmonic_rank == h.cohomology_rank);
    Matrix sum(m.dim(), m.dim());
    for (auto& p : h.spectrum) sum = sum + p.projector;
    CHECK(sum == Matrix::identity(m.dim()));
    // laplacian commutes with d_bar
    CHECK(h.laplacian * m.d_bar == m.d_bar * h.laplacian);
  }
  CHECK(hodge_data(builtin_elliptic_cohomology()).harmonic_rank == 4);
}

TEST_CASE("bv_bracket_vanishes_without_del") {
  DGBVModel m = builtin_elliptic_cohomology();
  for (int a = 0; a < m.dim(); ++a)
    for (int b = 0; b < m.dim(); ++b)
      CHECK(bv_bracket(m, GradedVector::basis(a), GradedVector::basis(b)).is_zero());
}

}
