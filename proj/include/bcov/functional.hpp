#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bcov/model.hpp"
#include "bcov/poly.hpp"

namespace bcov {

// Field variable x_(a,k): coordinate dual to e_a t^k. Ids sort a-major, then by k.
// Bits 22.. hold a copy index used by the graph oracle.
inline Var field_var(int a, int k, int par, int copy = 0) {
  return (Var(copy) << 22) | (Var(a + 1) << 10) | (Var(k) << 1) | Var(par & 1);
}
inline int var_alg(Var v) { return int((v >> 10) & 0xFFFu) - 1; }
inline int var_t(Var v) { return int((v >> 1) & 0x1FFu); }
inline int var_copy(Var v) { return int(v >> 22); }
inline Var strip_copy(Var v) { return v & ((1u << 22) - 1); }
inline Var with_copy(Var v, int c) { return strip_copy(v) | (Var(c) << 22); }

using FieldVec = std::map<Var, Q>;

// E_T = A[t]/t^(T+1) with shifted gradings.
struct FieldSpace {
  const DGBVModel* model = nullptr;
  int T = 0;

  FieldSpace() = default;
  FieldSpace(const DGBVModel& m, int t) : model(&m), T(t) {}

  Var var(int a, int k) const { return field_var(a, k, model->parity(a)); }
  std::vector<Var> vars() const;
  int shifted_degree(Var v) const { return model->degree(var_alg(v)) + 2 * var_t(v) - 2; }
  Q shifted_weight(Var v) const { return model->weight(var_alg(v)) + var_t(v); }
  int mode(Var v) const { return model->modes.empty() ? 0 : model->modes[var_alg(v)]; }
  std::string label(Var v) const;
  Var parse(const std::string& label) const;  // throws std::invalid_argument
};

struct Bounds {
  int G = 0, N = 0, T = 0;
};

// Sum over g of hbar^g times a polynomial. Negative g is allowed for
// intermediate operator results (the 1/hbar term of L_{-1}).
struct Functional {
  std::map<int, Poly> by_genus;
  Bounds bounds;

  bool is_zero() const;
  const Poly& get(int g) const;
  Poly& at(int g) { return by_genus[g]; }
  void prune();
  Functional& operator+=(const Functional& o);
  Functional& operator-=(const Functional& o);
  Functional scaled(const Q& s) const;
  Functional shifted(int dg) const;  // multiply by hbar^dg
  Functional truncated(int G, int N) const;
  Poly component(int g, int n) const { return arity_part(get(g), n); }
  std::size_t size() const;
  bool operator==(const Functional& o) const;
};

Functional operator+(Functional a, const Functional& b);
Functional operator-(Functional a, const Functional& b);

// Graded-symmetric two-tensor. Only entries with i <= j are stored; the
// represented operator is sum_{i<j} K^ij d_i d_j + 1/2 sum_i K^ii d_i d_i.
using Tensor2 = std::map<std::pair<Var, Var>, Q>;

struct Kernel2 {
  std::map<std::pair<Var, Var>, Q> upper;

  bool is_zero() const { return upper.empty(); }
  Q at(Var i, Var j) const;
  int parity() const;  // 0 for the zero kernel
  Tensor2 full() const;
  Kernel2& operator+=(const Kernel2& o);
  Kernel2& operator-=(const Kernel2& o);
  Kernel2 scaled(const Q& s) const;
  bool operator==(const Kernel2& o) const { return upper == o.upper; }
};

Kernel2 operator+(Kernel2 a, const Kernel2& b);
Kernel2 operator-(Kernel2 a, const Kernel2& b);

// Returns false and a witness when K^ji != (-1)^(p_i p_j) K^ij somewhere.
bool graded_symmetric(const Tensor2& t, std::string* witness = nullptr);
// Throws std::domain_error when t is not graded symmetric.
Kernel2 compress(const Tensor2& t);

// Linear map on field coordinates; image[j] lists D e_j = sum_i D_ij e_i.
struct FieldMap {
  int degree = 0;
  std::map<Var, std::vector<std::pair<Var, Q>>> image;

  void add(Var from, Var to, const Q& c);
  bool is_zero() const { return image.empty(); }
};

Poly contract(const Kernel2& K, const Poly& p);
// {F,G}_K = d_K(FG) - (d_K F)G - (-1)^(|K||F|) F d_K G
Poly bracket(const Kernel2& K, const Poly& F, const Poly& G);
// sum_ij K^ij (-1)^(p_j |F|) (d_i F)(d_j G): one edge between F and G
Poly bracket_wick(const Kernel2& K, const Poly& F, const Poly& G);
// X_D = sum_i (-1)^(|D| p_i) (sum_j D_ij x_j) d_i
Poly induced(const FieldMap& D, const Poly& p);
Poly directional(const FieldVec& v, const Poly& p);
// D_n F(v_1..v_n) = d_{v_1} ... d_{v_n} F at zero
Q evaluate(const Poly& p, const std::vector<FieldVec>& args);

Functional contract_kernel(const Functional& F, const Kernel2& K);
Functional kernel_bracket(const Functional& F, const Functional& G, const Kernel2& K);
Functional induced_derivation(const FieldMap& D, const Functional& F);
Functional field_contraction(const Functional& F, const FieldVec& v);
Functional multiply(const Functional& F, const Functional& G);
Q evaluate(const Functional& F, const std::vector<FieldVec>& args, int g);

using Op = std::function<Functional(const Functional&)>;

// functional degree -sum(shifted degrees), weight -sum(shifted weights)
int functional_degree(const FieldSpace& fs, const Mono& u);
Q functional_weight(const FieldSpace& fs, const Mono& u);

std::string mono_label(const FieldSpace& fs, const Mono& u);
// "g=.. [labels] coeff" for the first term of the lowest genus, "" if zero
std::string first_term(const Functional& F, const FieldSpace& fs);

std::string functional_to_json(const Functional& F, const FieldSpace& fs);
Functional functional_from_json(const std::string& text, const FieldSpace& fs);

// All monomials in the given variables up to arity n_max (odd variables at most once).
std::vector<Mono> monomials_up_to(const std::vector<Var>& vars, int n_max);

}  // namespace bcov
