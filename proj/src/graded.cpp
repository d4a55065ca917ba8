#include "bcov/graded.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace bcov {

int GradedBasis::index_of(const std::string& label) const {
  for (int i = 0; i < size(); ++i)
    if (labels[i] == label) return i;
  return -1;
}

void GradedBasis::add(const std::string& label, Grading g) {
  if (index_of(label) >= 0) throw std::invalid_argument("duplicate basis label " + label);
  labels.push_back(label);
  gradings.push_back(g);
}

GradedVector GradedVector::basis(int i, const Q& c) {
  GradedVector v;
  v.add(i, c);
  return v;
}

void GradedVector::add(int i, const Q& c) {
  if (c == 0) return;
  auto it = coords.find(i);
  if (it == coords.end()) {
    coords.emplace(i, c);
  } else {
    it->second += c;
    if (it->second == 0) coords.erase(it);
  }
}

GradedVector& GradedVector::operator+=(const GradedVector& o) {
  for (auto& [i, c] : o.coords) add(i, c);
  return *this;
}

GradedVector& GradedVector::operator-=(const GradedVector& o) {
  for (auto& [i, c] : o.coords) add(i, -c);
  return *this;
}

GradedVector GradedVector::scaled(const Q& s) const {
  GradedVector r;
  if (s == 0) return r;
  for (auto& [i, c] : coords) r.coords.emplace(i, c * s);
  return r;
}

std::optional<int> GradedVector::degree(const GradedBasis& b) const {
  std::optional<int> d;
  for (auto& [i, c] : coords) {
    int di = b.gradings[i].coh_degree;
    if (d && *d != di) return std::nullopt;
    d = di;
  }
  return d;
}

GradedVector apply(const Matrix& m, const GradedVector& v) {
  GradedVector r;
  for (auto& [j, c] : v.coords)
    for (int i = 0; i < m.rows(); ++i)
      if (m(i, j) != 0) r.add(i, m(i, j) * c);
  return r;
}

int koszul_sign(const std::vector<int>& degrees, const std::vector<int>& perm) {
  const int n = int(degrees.size());
  if (int(perm.size()) != n) throw std::invalid_argument("invalid permutation");
  std::vector<bool> seen(n, false);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[p]) throw std::invalid_argument("invalid permutation");
    seen[p] = true;
  }
  int odd = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (perm[a] > perm[b] && (degrees[perm[a]] & 1) && (degrees[perm[b]] & 1)) ++odd;
  return (odd & 1) ? -1 : 1;
}

CanonicalMonomial canonicalize_monomial(std::vector<Factor> factors) {
  CanonicalMonomial out;
  // insertion sort, counting odd transpositions
  int odd = 0;
  for (size_t i = 1; i < factors.size(); ++i) {
    size_t j = i;
    while (j > 0 && factors[j - 1].index > factors[j].index) {
      if ((factors[j - 1].degree & 1) && (factors[j].degree & 1)) ++odd;
      std::swap(factors[j - 1], factors[j]);
      --j;
    }
  }
  for (size_t i = 1; i < factors.size(); ++i)
    if (factors[i].index == factors[i - 1].index && (factors[i].degree & 1)) {
      out.sign = 0;
      return out;
    }
  out.factors = std::move(factors);
  out.sign = (odd & 1) ? -1 : 1;
  return out;
}

std::vector<Q> characteristic_polynomial(const Matrix& M) {
  // Faddeev-LeVerrier
  const int n = M.rows();
  std::vector<Q> c(n + 1);
  c[n] = 1;
  Matrix Mk(n, n);  // M_0 = 0
  for (int k = 1; k <= n; ++k) {
    Matrix t = Mk;
    for (int i = 0; i < n; ++i) t(i, i) += c[n - k + 1];
    Mk = M * t;
    Q tr = 0;
    for (int i = 0; i < n; ++i) tr += Mk(i, i);
    c[n - k] = -tr / k;
  }
  return c;
}

namespace {

Q eval_poly(const std::vector<Q>& c, const Q& x) {
  Q r = 0;
  for (size_t i = c.size(); i-- > 0;) r = r * x + c[i];
  return r;
}

// synthetic division by (x - r)
std::vector<Q> deflate(const std::vector<Q>& c, const Q& r) {
  const size_t n = c.size() - 1;
  std::vector<Q> q(n);
  Q acc = c[n];
  for (size_t i = n; i-- > 0;) {
    q[i] = acc;
    acc = c[i] + acc * r;
  }
  return q;
}

std::vector<mpz_class> divisors(mpz_class v, long bound) {
  v = abs(v);
  std::vector<mpz_class> d;
  if (v == 0) return d;
  if (v > bound) {
    for (long k = 1; k <= bound; ++k)
      if (v % k == 0) d.push_back(k);
    return d;
  }
  long n = v.get_si();
  for (long k = 1; k <= n; ++k)
    if (n % k == 0) d.push_back(k);
  return d;
}

[[noreturn]] void unsupported() { throw std::domain_error("spectrum not rational-semisimple"); }

}  // namespace

std::vector<EigenPart> rational_eigendecomposition(const Matrix& M, long root_bound) {
  const int n = M.rows();
  if (n != M.cols()) throw std::invalid_argument("matrix not square");
  if (n == 0) return {};
  std::vector<Q> poly = characteristic_polynomial(M);
  std::vector<Q> roots;
  while (poly.size() > 1) {
    while (poly.size() > 1 && poly[0] == 0) {
      roots.push_back(0);
      poly.erase(poly.begin());
    }
    if (poly.size() == 1) break;
    // integer coefficients
    mpz_class l = 1;
    for (auto& x : poly) l = lcm(l, x.get_den());
    std::vector<mpz_class> ic;
    for (auto& x : poly) ic.push_back(mpz_class(x * l));
    bool found = false;
    for (auto& p : divisors(ic.front(), root_bound)) {
      for (auto& q : divisors(ic.back(), root_bound)) {
        for (int s : {1, -1}) {
          Q r(p * s, q);
          r.canonicalize();
          if (eval_poly(poly, r) == 0) {
            roots.push_back(r);
            poly = deflate(poly, r);
            found = true;
            break;
          }
        }
        if (found) break;
      }
      if (found) break;
    }
    if (!found) unsupported();
  }
  std::sort(roots.begin(), roots.end());
  std::vector<Q> spec;
  for (auto& r : roots)
    if (spec.empty() || spec.back() != r) spec.push_back(r);
  // minimal polynomial must be the product of distinct linear factors
  Matrix prod = Matrix::identity(n);
  for (auto& l : spec) prod = prod * (M - Matrix::identity(n).scaled(l));
  if (!prod.is_zero()) unsupported();
  std::vector<EigenPart> out;
  for (auto& l : spec) {
    Matrix P = Matrix::identity(n);
    for (auto& mu : spec) {
      if (mu == l) continue;
      P = P * (M - Matrix::identity(n).scaled(mu)).scaled(1 / Q(l - mu));
    }
    out.push_back({l, P});
  }
  return out;
}

}  // namespace bcov
