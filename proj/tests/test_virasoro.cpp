#include "doctest.h"

#include "bcov/classical.hpp"
#include "bcov/virasoro.hpp"

using namespace bcov;

TEST_SUITE("virasoro") {

TEST_CASE("factor_is_product_of_shifted_weights") {
  DGBVModel m = builtin_elliptic_cohomology();
  // d = 1: factor for L_n on e_a t^k is prod_{j=k}^{k+n} (j + w_a + 1)
  for (int a = 0; a < m.dim(); ++a)
    for (int k = 0; k <= 4; ++k)
      for (int n = 0; n <= 3; ++n) {
        Q want = 1;
        for (int j = k; j <= k + n; ++j) want *= Q(j) + m.weight(a) + 1;
        CHECK(virasoro_factor(m, n, a, k) == want);
      }
  // unit has weight -1, so L_0 kills 1 t^0
  CHECK(virasoro_factor(m, 0, m.unit, 0) == 0);
}

TEST_CASE("relation_table") {
  Report r = check_virasoro_relations(builtin_elliptic_cohomology(), 3, 6);
  CHECK(r.all_pass());
  CHECK(r.checks.size() == 25);
  CHECK(check_virasoro_relations(builtin_fourier_torus(1), 2, 6).all_pass());
}

TEST_CASE("matrix_commutator_oracle") {
  DGBVModel m = builtin_elliptic_cohomology();
  LaurentWindow w{-4, 12};
  Matrix L1 = virasoro_matrix(m, 1, w, true), L2 = virasoro_matrix(m, 2, w, true), L3 = virasoro_matrix(m, 3, w, true);
  Matrix c = L1 * L2 - L2 * L1;
  // [L_1, L_2] = (2-1) L_3 on columns whose images stay inside the window
  int len = w.hi - w.lo + 1, checked = 0;
  for (int k = w.lo; k + 3 <= w.hi; ++k)
    for (int a = 0; a < m.dim(); ++a) {
      int col = a * len + (k - w.lo);
      for (int i = 0; i < c.rows(); ++i) CHECK(c(i, col) == L3(i, col));
      ++checked;
    }
  CHECK(checked > 0);
  CHECK_THROWS_AS(virasoro_matrix(m, 2, w), TruncationUnderflow);
}

TEST_CASE("classical_equations") {
  DGBVModel e = builtin_elliptic_cohomology();
  Functional F = build_classical_bcov(e, 6, 4);
  for (int n : {1, 2}) CHECK(check_classical_virasoro(F, e, n).all_pass());
  DGBVModel f = builtin_fourier_torus(1);
  Functional G = build_classical_bcov(f, 5, 3);
  for (int n : {1, 2}) CHECK(check_classical_virasoro(G, f, n).all_pass());
}

TEST_CASE("classical_equation_detects_corruption") {
  DGBVModel e = builtin_elliptic_cohomology();
  Functional F = build_classical_bcov(e, 6, 4);
  auto& p = F.at(0);
  for (auto& [u, c] : p.terms)
    if (arity(u) == 4) {
      c *= 3;
      break;
    }
  CHECK_FALSE(check_classical_virasoro(F, e, 1).all_pass());
}

TEST_CASE("dilaton_vector_underflow") {
  DGBVModel e = builtin_elliptic_cohomology();
  FieldSpace fs(e, 1);
  CHECK_NOTHROW(dilaton_vector(fs, 0));
  CHECK_THROWS_AS(dilaton_vector(fs, 1), TruncationUnderflow);
}

TEST_CASE("kernels_and_inverse") {
  DGBVModel f = builtin_fourier_torus(1);
  CHECK(check_virasoro_kernels(f, Q(1, 2), 2, 3).all_pass());
  Report r = check_effective_inverse(f, Q(1, 2), 3);
  CHECK(r.all_pass());
  DGBVModel s = resolve_model(std::string(BCOV_MODEL_DIR) + "/surface-d2.json");
  VirasoroOps ops(s, 2, Q(1, 2));
  CHECK_FALSE(ops.V(1).is_zero());
  CHECK(ops.V(0).is_zero());
  CHECK(ops.V(-1).is_zero());
}

TEST_CASE("homotopic_relations_small") {
  Report r = check_homotopic_virasoro(builtin_fourier_torus(1), Q(1, 2), 1, {1, 3, 2});
  CHECK(r.all_pass());
  bool sign_reported = false;
  for (auto& [k, v] : r.info) sign_reported = sign_reported || k.find("sign") != std::string::npos;
  CHECK(sign_reported);
}

}
