#pragma once

#include <string>
#include <vector>

#include "bcov/kernels.hpp"
#include "bcov/report.hpp"

namespace bcov {

// Qhat_q = X_Q + hbar Delta_q on functionals over E_T.
struct FockDifferential {
  FieldMap Q;
  Kernel2 D;
  Functional operator()(const Functional& F) const;
};

FockDifferential fock_differential(const KernelFactory& kf, const FieldSpace& fs, const Q& q);

// A = B on every input monomial (genus 0). Records the first mismatch.
struct OpComparison {
  bool ok = true;
  int tested = 0;
  std::string witness;
  std::string defect;
};
OpComparison compare_operators(const Op& A, const Op& B, const std::vector<Mono>& inputs, const FieldSpace& fs);
Op op_sum(std::vector<Op> ops);
Op op_scaled(Op A, const Q& c);
// graded commutator AB - (-1)^(|A||B|) BA
Op op_commutator(Op A, Op B, bool both_odd);
Op op_zero();

// Q-hat squared on all monomials of arity <= N (k <= T), for each q.
Report check_fock_nilpotence(const DGBVModel& m, const Bounds& b, const std::vector<Q>& scales);

// [X_Q, d_P(q1,q2)] = Delta_q1 - Delta_q2 and the exponentiated form.
Report check_conjugation_lemma(const DGBVModel& m, const Q& q1, const Q& q2, const Bounds& b);

// Truncated Qhat cohomology dimension per scale and metric; all must agree.
struct CohomologyDims {
  std::string model;
  Q q;
  long total = 0;
  long dim = 0;
};
Report check_fock_cohomology_invariance(const std::vector<DGBVModel>& metrics, const std::vector<Q>& scales,
                                        const Bounds& b, std::vector<CohomologyDims>* dims = nullptr);

// Finite dg symplectic data for the generic Fock construction. Subspaces are
// given by column vectors in the ambient basis.
struct SymplecticData {
  std::vector<std::string> labels;
  std::vector<int> degrees;
  Matrix omega;  // omega(e_i, e_j)
  Matrix d;      // d e_j = sum_i d(i,j) e_i
  Matrix L;      // columns span L
  Matrix Lprime; // columns span L'
};

struct GenericFock {
  std::vector<std::string> labels;  // coordinates on L
  std::vector<int> degrees;
  FieldMap dL;
  Kernel2 P;
  Functional operator()(const Functional& F) const;
  std::string label(Var v) const;
};

// Throws std::invalid_argument naming the violated condition.
GenericFock generic_fock_differential(const SymplecticData& s);
Report check_generic_fock(const GenericFock& f, int n_max);
// 4-dimensional instance: x, y, x', y' with d x = y, d x' = beta y, d y' = -x' + beta x.
SymplecticData sample_symplectic(const Q& beta);

}  // namespace bcov

namespace bcov {

// Q F + hbar Delta_q F + 1/2 {F,F}_q, no truncation applied.
Functional qme_defect(const FockDifferential& Qh, const Functional& F);
// e^{hbar d_K} applied to F as a finite sum (d_K lowers arity by two).
Functional exp_contract(const Functional& F, const Kernel2& K, const Q& sign = 1);

}  // namespace bcov
