#pragma once

#include "bcov/functional.hpp"

namespace bcov {

// (n-3)! / prod k_i!  with n-3 = sum k_i
Q multinomial(const std::vector<int>& ks);

// Genus-0 components n = 3..N_max on E_T:
// D_nF(a_1 t^k1, ..., a_n t^kn) = multinomial(n-3; k) Tr(a_1 ... a_n) when sum k = n-3.
Functional build_classical_bcov(const DGBVModel& m, int N_max, int T);

// QF + 1/2 {F,F} with the kernel of del at t^0, through arity min(N, T+3).
Report check_classical_master_equation(const Functional& F, const DGBVModel& m);
Report check_string_equation(const Functional& F, const DGBVModel& m);
Report check_dilaton_equation(const Functional& F, const DGBVModel& m);
// support, degree 6-2d and weight -(d-3)
Report check_classical_gradings(const Functional& F, const DGBVModel& m);

struct TableRow {
  std::vector<std::string> inputs;
  std::vector<int> ks;
  Q multinomial;
  Q trace;
  Q value;
};
// One row per canonical input tuple with nonzero D_nF, n = 3..n_max.
std::vector<TableRow> classical_table(const DGBVModel& m, int n_max);

}  // namespace bcov
