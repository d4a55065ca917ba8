#include "bcov/poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace bcov {

int odd_count(const Mono& u) {
  int c = 0;
  for (Var v : u) c += var_parity(v);
  return c;
}

bool has_delta(const Mono& u) { return !u.empty() && u.front() == DELTA; }

int arity(const Mono& u) { return int(u.size()) - (has_delta(u) ? 1 : 0); }

int mono_mul(const Mono& u, const Mono& v, Mono& out) {
  out.clear();
  out.reserve(u.size() + v.size());
  int odd_u = odd_count(u);
  long inv = 0;
  std::size_t i = 0, j = 0;
  while (i < u.size() || j < v.size()) {
    if (j == v.size() || (i < u.size() && u[i] <= v[j])) {
      if (j < v.size() && u[i] == v[j] && var_parity(u[i])) return 0;
      if (var_parity(u[i])) --odd_u;
      out.push_back(u[i++]);
    } else {
      if (var_parity(v[j])) inv += odd_u;
      out.push_back(v[j++]);
    }
  }
  return (inv & 1) ? -1 : 1;
}

long mono_deriv(Var x, const Mono& u, Mono& out) {
  auto it = std::lower_bound(u.begin(), u.end(), x);
  if (it == u.end() || *it != x) return 0;
  long mult = 0;
  for (auto jt = it; jt != u.end() && *jt == x; ++jt) ++mult;
  int s = 1;
  if (var_parity(x))
    for (auto jt = u.begin(); jt != it; ++jt)
      if (var_parity(*jt)) s = -s;
  out.assign(u.begin(), it);
  out.insert(out.end(), it + 1, u.end());
  return s * mult;
}

void Poly::add(const Mono& m, const Q& c) {
  if (c == 0) return;
  auto [it, fresh] = terms.try_emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms.erase(it);
  }
}

Poly& Poly::operator+=(const Poly& o) {
  for (auto& [m, c] : o.terms) add(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (auto& [m, c] : o.terms) add(m, -c);
  return *this;
}

Poly Poly::scaled(const Q& s) const {
  Poly r;
  if (s == 0) return r;
  for (auto& [m, c] : terms) r.terms.emplace_hint(r.terms.end(), m, c * s);
  return r;
}

Poly Poly::constant(const Q& c) { return monomial({}, c); }

Poly Poly::monomial(const Mono& m, const Q& c) {
  Poly p;
  p.add(m, c);
  return p;
}

Poly operator+(Poly a, const Poly& b) { return a += b; }
Poly operator-(Poly a, const Poly& b) { return a -= b; }

Poly operator*(const Poly& a, const Poly& b) {
  Poly r;
  Mono w;
  for (auto& [u, cu] : a.terms)
    for (auto& [v, cv] : b.terms) {
      int s = mono_mul(u, v, w);
      if (s) r.add(w, Q(s > 0 ? Q(cu * cv) : Q(-(cu * cv))));
    }
  return r;
}

Poly deriv(Var x, const Poly& p) {
  Poly r;
  Mono w;
  for (auto& [u, c] : p.terms) {
    long s = mono_deriv(x, u, w);
    if (s) r.add(w, c * s);
  }
  return r;
}

int parity(const Poly& p) {
  int par = -1;
  for (auto& [u, c] : p.terms) {
    int q = odd_count(u) & 1;
    if (par >= 0 && q != par) throw std::domain_error("polynomial of mixed parity");
    par = q;
  }
  return par;
}

Poly arity_part(const Poly& p, int n) {
  Poly r;
  for (auto& [u, c] : p.terms)
    if (arity(u) == n) r.terms.emplace_hint(r.terms.end(), u, c);
  return r;
}

Poly truncate_arity(const Poly& p, int n_max) {
  Poly r;
  for (auto& [u, c] : p.terms)
    if (arity(u) <= n_max) r.terms.emplace_hint(r.terms.end(), u, c);
  return r;
}

void split_delta(const Poly& p, Poly& p0, Poly& p1) {
  p0 = Poly();
  p1 = Poly();
  for (auto& [u, c] : p.terms) {
    if (has_delta(u))
      p1.add(Mono(u.begin() + 1, u.end()), c);
    else
      p0.terms.emplace_hint(p0.terms.end(), u, c);
  }
}

Poly times_delta(const Poly& p) {
  Poly r;
  for (auto& [u, c] : p.terms) {
    if (has_delta(u)) continue;
    Mono w;
    w.reserve(u.size() + 1);
    w.push_back(DELTA);
    w.insert(w.end(), u.begin(), u.end());
    r.add(w, c);
  }
  return r;
}

}  // namespace bcov
