#pragma once

#include <future>
#include <mutex>

#include "bcov/flow.hpp"
#include "bcov/virasoro.hpp"

namespace bcov {

// F[q] = flow of the base functional by P(q0, q); scales above q0 flow by -P.
class ScaledTheory {
 public:
  ScaledTheory(const DGBVModel& m, const Q& q0, Functional base);
  const DGBVModel& model() const { return *m_; }
  const Q& base_scale() const { return q0_; }
  const Bounds& bounds() const { return base_.bounds; }
  // Computed at most once per scale; safe for concurrent callers.
  Functional at(const Q& q) const;
  int materialized() const;

 private:
  const DGBVModel* m_;
  Q q0_;
  Functional base_;
  KernelFactory kf_;
  mutable std::mutex mu_;
  mutable std::map<Q, std::shared_future<Functional>> cache_;
};

// Arity kept per genus by flowed theories: N + 2(G - g).
inline int arity_bound(const Bounds& b, int g) { return b.N + 2 * (b.G - g); }

// Genus <= G, arity <= arity_bound, and no t^T variable when del != 0 (X_Q
// would need t^(T+1) coefficients there).
Functional exact_part(const Functional& F, const DGBVModel& m, int arity_shift = 0, int top_drop = 0);

// QF + hbar Delta_q F + 1/2{F,F}_q = 0, with e^{-F/h} Qhat e^{F/h} as a second route
// on the two lowest hbar orders.
Report check_qme(const Functional& F, const DGBVModel& m, const Q& q);

// degree (d-3)(2g-2), weight (d-3)(g-1); classical limit when q = 1
Report check_axioms(const Functional& F, const DGBVModel& m, bool at_q1 = true);

struct ObstructionOptions {
  bool dilaton = false;        // impose L_0[q]-Virasoro on the genus-g unknowns
  bool dilaton_top = false;    // also at arity N, reading F_{g,N+1} as 0
};

struct ObstructionResult {
  bool solvable = false;
  int unknowns = 0;            // constrained F_g monomials
  int homotopy_unknowns = 0;   // G_g monomials for the L_0 relation
  int equations = 0;
  int rank = 0;
  int solution_dim = 0;        // affine dimension of F_g solutions
  int homotopy_dim = 0;        // image of delta_F inside the solutions
  int dim_mod_homotopy = 0;
  Functional particular;
  std::vector<Functional> kernel;
  std::string witness;
};

// Solves delta_F F_g = -O with delta_F = X_Q + {F_0, .}_q on the axiom-constrained
// genus-g monomials of arity <= N over E_T. F must carry all genera below g.
ObstructionResult solve_obstruction(const Functional& F, const DGBVModel& m, int target_g, const Bounds& b, const Q& q,
                                    const ObstructionOptions& opt = {});

// Classical genus 0 (arity N+2G) plus particular genus-g solutions at q = 1,
// g = 1..G. Stops at the first obstructed genus; results are appended to log.
Functional build_quantized(const DGBVModel& m, const Bounds& b, std::vector<ObstructionResult>* log = nullptr);

// Harmonic coordinates y_(j,k) for a basis h_j of harmonic elements.
struct HarmonicSpace {
  std::vector<std::string> labels;
  std::vector<int> parity;
  std::vector<int> alg;  // model basis index when h_j is a basis vector, else -1
  Matrix H;              // model dim x r
  Matrix pairing;        // Tr(h_i h_j)
  int T = 0;
  Var var(int j, int k) const { return field_var(j, k, parity[j]); }
  std::string label(Var v) const;
  std::string mono_label(const Mono& u) const;
};
HarmonicSpace harmonic_space(const DGBVModel& m, int T);
// F restricted to span(h_j t^k)
Functional restrict_to(const Functional& F, const HarmonicSpace& h);

// phi: alpha t^k (k < 0) -> sum c beta t^l (l >= 0) on harmonic classes.
struct Polarization {
  struct Entry {
    int src;
    int src_k;
    int tgt;
    int tgt_k;
    Q c;
  };
  std::vector<Entry> phi;
};
Polarization parse_polarization(const std::string& json_text, const HarmonicSpace& h);
// Lagrangian and t^-1 stability of the complement; throws std::invalid_argument.
void validate_polarization(const Polarization& p, const HarmonicSpace& h);
// sum phi(e_l) (x) (-1)^k alpha^v t^(-k-1)
Kernel2 polarization_kernel(const Polarization& p, const HarmonicSpace& h);

struct CorrelatorEntry {
  int g;
  std::vector<std::string> inputs;
  Q value;
};
// Flows to q = 0, restricts to harmonics, applies the polarization. Refuses
// (std::runtime_error) when the QME fails at the base scale.
std::vector<CorrelatorEntry> correlators(const ScaledTheory& th, const Polarization* pol, int g_max, int n_max);

// (a) four-term relation at q1, (b) twisted flow to q2 agrees with the plain flow
// in delta-degree 0, (c) four-term relation at q2 after flowing.
Report check_virasoro_quantization(const Functional& F, const Functional& G, const DGBVModel& m, int n, const Q& q1,
                                   const Q& q2);
// L_nF + 1/2{F,F}_{V_n} - Qhat G - {F,G}_q, restricted to the exact range
Functional virasoro_defect(const Functional& F, const Functional& G, const DGBVModel& m, int n, const Q& q);

// L_n[0]F + 1/2{F,F}_{V_n(0)} on harmonic inputs for F = F[0].
Report quantum_virasoro_limit_check(const Functional& F0, const DGBVModel& m, int n);

}  // namespace bcov
