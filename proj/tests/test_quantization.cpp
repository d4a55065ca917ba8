#include "doctest.h"

#include <thread>

#include "bcov/classical.hpp"
#include "bcov/quantization.hpp"

using namespace bcov;

namespace {

Functional classical(const DGBVModel& m, int G, int N, int T) {
  Functional F = build_classical_bcov(m, N + 2 * G, T);
  F.bounds = {G, N, T};
  return F;
}

bool same_table(const std::vector<CorrelatorEntry>& a, const std::vector<CorrelatorEntry>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].g != b[i].g || a[i].inputs != b[i].inputs || a[i].value != b[i].value) return false;
  return true;
}

}  // namespace

TEST_SUITE("quantization") {

TEST_CASE("qme_along_the_flow_genus_zero") {
  DGBVModel f = builtin_fourier_torus(1);
  ScaledTheory th(f, 1, classical(f, 0, 5, 3));
  for (Q q : {Q(1), Q(1, 2), Q(0)}) {
    CHECK(check_qme(th.at(q), f, q).all_pass());
    CHECK(check_axioms(th.at(q), f, q == 1).all_pass());
  }
}

TEST_CASE("genus_one_quantization_on_fourier") {
  DGBVModel f = builtin_fourier_torus(1);
  std::vector<ObstructionResult> log;
  Functional F = build_quantized(f, {1, 3, 3}, &log);
  REQUIRE(log.size() == 1);
  CHECK(log[0].solvable);
  CHECK(log[0].unknowns > 0);
  ScaledTheory th(f, 1, F);
  for (Q q : {Q(1), Q(1, 2), Q(0)}) CHECK(check_qme(th.at(q), f, q).all_pass());
}

TEST_CASE("corrupted_genus_one_term_fails_qme") {
  DGBVModel f = builtin_fourier_torus(1);
  Functional F = build_quantized(f, {1, 3, 3});
  FieldSpace fs(f, 3);
  Var x = fs.var(0, 1);
  F.at(1).add({x, x}, 1);
  Report r = check_qme(F, f, 1);
  CHECK_FALSE(r.all_pass());
  CHECK(r.checks[0].witness.find("(g,n)=(1,") == 0);
}

TEST_CASE("wrong_weight_flagged") {
  DGBVModel e = builtin_elliptic_cohomology();
  Functional F = classical(e, 1, 3, 2);
  FieldSpace fs(e, 2);
  F.at(1).add({fs.var(1, 1)}, 1);  // theta t: weight -1
  Report r = check_axioms(F, e, true);
  CHECK_FALSE(r.all_pass());
  CHECK(r.find("weight (d-3)(g-1)")->status == Status::Fail);
}

TEST_CASE("obstruction_on_elliptic") {
  DGBVModel e = builtin_elliptic_cohomology();
  Functional F = classical(e, 0, 4, 2);
  auto plain = solve_obstruction(F, e, 1, {1, 4, 2}, 1);
  CHECK(plain.solvable);
  CHECK(plain.equations == 0);
  CHECK(plain.solution_dim == plain.unknowns);
  CHECK(plain.particular.is_zero());
  ObstructionOptions d;
  d.dilaton = true;
  auto dil = solve_obstruction(F, e, 1, {1, 4, 2}, 1, d);
  CHECK(dil.solvable);
  CHECK(dil.solution_dim < plain.solution_dim);
  d.dilaton_top = true;
  auto top = solve_obstruction(F, e, 1, {1, 4, 2}, 1, d);
  CHECK(top.solution_dim == 0);
}

TEST_CASE("obstruction_truncation_guard") {
  DGBVModel f = builtin_fourier_torus(1);
  Functional F = classical(f, 0, 6, 2);
  CHECK_THROWS_AS(solve_obstruction(F, f, 1, {1, 4, 2}, 1), TruncationUnderflow);
  CHECK_THROWS_AS(solve_obstruction(F, f, 0, {1, 4, 2}, 1), std::invalid_argument);
}

TEST_CASE("harmonic_restriction") {
  DGBVModel e = builtin_elliptic_cohomology();
  HarmonicSpace h = harmonic_space(e, 2);
  CHECK(h.labels == std::vector<std::string>{"1", "theta", "eta", "theta_eta"});
  Functional F = classical(e, 0, 5, 2);
  CHECK(restrict_to(F, h) == F);
  DGBVModel f = builtin_fourier_torus(1);
  HarmonicSpace hf = harmonic_space(f, 1);
  CHECK(int(hf.labels.size()) == hodge_data(f).harmonic_rank);
  CHECK(inverse(hf.pairing).has_value());
}

TEST_CASE("yukawa_correlator") {
  DGBVModel e = builtin_elliptic_cohomology();
  ScaledTheory th(e, 1, classical(e, 0, 4, 2));
  bool found = false;
  for (auto& c : correlators(th, nullptr, 0, 3))
    if (c.inputs == std::vector<std::string>{"1@0", "theta@0", "eta@0"}) {
      CHECK(c.value == 1);
      found = true;
    }
  CHECK(found);
}

TEST_CASE("default_correlators_independent_of_base_scale") {
  DGBVModel f = builtin_fourier_torus(1);
  Functional F = classical(f, 0, 4, 2);
  ScaledTheory a(f, 1, F);
  ScaledTheory b(f, Q(1, 2), a.at(Q(1, 2)));
  CHECK(same_table(correlators(a, nullptr, 0, 4), correlators(b, nullptr, 0, 4)));
}

TEST_CASE("polarization_change") {
  DGBVModel e = builtin_elliptic_cohomology();
  ScaledTheory th(e, 1, classical(e, 1, 3, 3));
  HarmonicSpace h = harmonic_space(e, 3);
  Polarization id = parse_polarization(R"({"phi": []})", h);
  CHECK(same_table(correlators(th, nullptr, 1, 3), correlators(th, &id, 1, 3)));
  Polarization p = parse_polarization(R"({"phi": [["theta_eta", -1, "1", 0, "1/2"]]})", h);
  CHECK_NOTHROW(validate_polarization(p, h));
  Kernel2 B = polarization_kernel(p, h);
  REQUIRE(B.upper.size() == 1);
  CHECK(B.upper.begin()->first == std::make_pair(h.var(0, 0), h.var(0, 0)));
  CHECK(B.upper.begin()->second == Q(-1, 2));
  auto changed = correlators(th, &p, 1, 3);
  CHECK_FALSE(same_table(changed, correlators(th, nullptr, 1, 3)));
  // the genus-0 three-point function is untouched
  for (auto& c : changed)
    if (c.g == 0 && c.inputs.size() == 3) CHECK(c.value == 1);
  Polarization bad = parse_polarization(R"({"phi": [["theta_eta", -1, "theta", 0, "1"]]})", h);
  CHECK_THROWS_WITH_AS(validate_polarization(bad, h), doctest::Contains("not Lagrangian"), std::invalid_argument);
  CHECK_THROWS_AS(parse_polarization(R"({"phi": [["theta_eta", 1, "1", 0, "1"]]})", h), std::invalid_argument);
  CHECK_THROWS_AS(parse_polarization(R"({"phi": [["nope", -1, "1", 0, "1"]]})", h), std::invalid_argument);
}

TEST_CASE("correlators_refuse_off_shell") {
  DGBVModel f = builtin_fourier_torus(1);
  Functional F = classical(f, 0, 4, 2);
  auto& p = F.at(0);
  p.terms.begin()->second += 1;
  ScaledTheory th(f, 1, F);
  CHECK_THROWS_AS(correlators(th, nullptr, 0, 3), std::runtime_error);
}

TEST_CASE("scaled_theory_memoizes_once") {
  DGBVModel f = builtin_fourier_torus(1);
  ScaledTheory th(f, 1, classical(f, 0, 4, 2));
  std::vector<Functional> out(8);
  std::vector<std::thread> ts;
  for (int i = 0; i < 8; ++i) ts.emplace_back([&, i] { out[i] = th.at(Q(1, 3)); });
  for (auto& t : ts) t.join();
  CHECK(th.materialized() == 1);
  for (auto& o : out) CHECK(o == out[0]);
  // above the base scale
  ScaledTheory low(f, Q(1, 3), out[0]);
  CHECK(low.at(1) == th.at(1));
  CHECK_THROWS_AS(th.at(2), std::invalid_argument);
}

TEST_CASE("virasoro_quantization_classical_case") {
  DGBVModel f = builtin_fourier_torus(1);
  Functional F = classical(f, 0, 5, 3);
  for (int n : {0, 1}) CHECK(check_virasoro_quantization(F, Functional{}, f, n, 1, Q(1, 2)).all_pass());
  DGBVModel e = builtin_elliptic_cohomology();
  Functional E = classical(e, 1, 3, 3);
  CHECK(check_virasoro_quantization(E, Functional{}, e, 0, 1, Q(1, 2)).all_pass());
}

TEST_CASE("virasoro_defect_detects_corruption") {
  DGBVModel e = builtin_elliptic_cohomology();
  Functional F = classical(e, 0, 5, 3);
  CHECK(virasoro_defect(F, Functional{}, e, 1, 1).is_zero());
  FieldSpace fs(e, 3);
  F.at(0).add({fs.var(0, 0), fs.var(1, 1), fs.var(2, 0)}, 1);
  CHECK_FALSE(virasoro_defect(F, Functional{}, e, 1, 1).is_zero());
}

TEST_CASE("quantum_limit") {
  DGBVModel e = builtin_elliptic_cohomology();
  ScaledTheory th(e, 1, classical(e, 0, 5, 3));
  for (int n : {0, 1, 2}) CHECK(quantum_virasoro_limit_check(th.at(0), e, n).all_pass());
  Functional zero;
  zero.bounds = {0, 4, 3};
  CHECK(quantum_virasoro_limit_check(zero, e, 0).all_pass());
}

}
