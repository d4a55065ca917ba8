#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "bcov/rational.hpp"

namespace bcov {

// Variables are opaque 32-bit ids whose lowest bit is the parity.
// Id 1 is reserved for the odd nilpotent parameter delta.
using Var = std::uint32_t;
using Mono = std::vector<Var>;  // sorted; odd ids never repeat

constexpr Var DELTA = 1;

inline int var_parity(Var v) { return int(v & 1u); }
int odd_count(const Mono& u);
int arity(const Mono& u);  // number of factors other than delta
bool has_delta(const Mono& u);

// Product of sorted monomials. Returns the Koszul sign, or 0 if the result vanishes.
int mono_mul(const Mono& u, const Mono& v, Mono& out);
// Left derivative: returns sign * multiplicity (0 if x does not occur).
long mono_deriv(Var x, const Mono& u, Mono& out);

struct Poly {
  std::map<Mono, Q> terms;

  bool is_zero() const { return terms.empty(); }
  std::size_t size() const { return terms.size(); }
  void add(const Mono& m, const Q& c);
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly scaled(const Q& s) const;
  bool operator==(const Poly& o) const { return terms == o.terms; }
  static Poly constant(const Q& c);
  static Poly monomial(const Mono& m, const Q& c = 1);
};

Poly operator+(Poly a, const Poly& b);
Poly operator-(Poly a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);

Poly deriv(Var x, const Poly& p);
// -1 for the zero polynomial; throws std::domain_error on mixed parity.
int parity(const Poly& p);
Poly arity_part(const Poly& p, int n);
Poly truncate_arity(const Poly& p, int n_max);
// split by delta: p = p0 + delta * p1
void split_delta(const Poly& p, Poly& p0, Poly& p1);
Poly times_delta(const Poly& p);

}  // namespace bcov
