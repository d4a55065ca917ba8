#pragma once

#include "bcov/fock.hpp"

namespace bcov {

// L_n(e_a t^k) = virasoro_factor * e_a t^(k+n); L_{-1} = t^-1 with factor 1.
Q virasoro_factor(const DGBVModel& m, int n, int a, int k);

struct LaurentWindow {
  int lo = 0, hi = 0;
  bool contains(int k) const { return k >= lo && k <= hi; }
};

// Matrix of L_n on the window, columns/rows indexed a*(hi-lo+1) + (k-lo).
// Throws TruncationUnderflow if some image leaves the window unless clip is set
// (clipped columns are zero).
Matrix virasoro_matrix(const DGBVModel& m, int n, const LaurentWindow& w, bool clip = false);

// [L_n, L_m] = (m-n) L_{n+m} for -1 <= n,m <= n_max on [-(n_max+1), T+n_max+1].
Report check_virasoro_relations(const DGBVModel& m, int n_max, int T);

// L_n(t) = t^(n+1) prod_{k=0}^n (k - (d-3)/2) 1
FieldVec dilaton_vector(const FieldSpace& fs, int n);

// -d/dL_n(t) F + L_n F + 1/2 {F,F}_{V_n(1)} on arities <= n_check.
Report check_classical_virasoro(const Functional& F, const DGBVModel& m, int n, int n_check = -1);

// Quadratic trace pairing functional, d/d(1) D_3F.
Poly trace_pairing(const DGBVModel& m);

struct VirasoroOps {
  const DGBVModel* model;
  FieldSpace fs;  // operators live on E_{T+2}
  Q q;
  KernelFactory kf;
  Poly T2;

  VirasoroOps(const DGBVModel& m, int T, const Q& q);
  Op L(int n) const;           // effective L_n[q], n >= -1
  Op U(int n) const;           // U_n[q], n >= 0
  Op Qhat() const;
  Kernel2 V(int n) const;      // [(L_n (x) 1) omega^{-1}(q)]_+
  FieldMap Y() const;
  FieldMap Ln_map(int n) const;
  // L_n F + 1/2{F,F}_{V_n} as the exponent of L_n[q] e^{F/hbar}; for n = -1 the
  // 1/hbar term contributes T2.
  Functional apply_exp(int n, const Functional& F) const;
};

// [L_n,L_m] = (n-m)L_{n+m} (and the opposite sign as info), [L_n,L_{-1}] =
// (n+1)L_{n-1} + [Qhat,U_n], [Qhat,L_n] = 0, on monomials with k <= T.
Report check_homotopic_virasoro(const DGBVModel& m, const Q& q, int n_max, const Bounds& b);

// V_{-1} = V_0 = 0, graded symmetry of V_n for n <= n_max.
Report check_virasoro_kernels(const DGBVModel& m, const Q& q, int n_max, int T);

// [(Q (x) 1) omega^{-1}]_+ and [(Q (x) 1 + 1 (x) Q) omega^{-1}]_+ compared with D(q).
Report check_effective_inverse(const DGBVModel& m, const Q& q, int T);

}  // namespace bcov
