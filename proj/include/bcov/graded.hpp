#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bcov/linalg.hpp"
#include "bcov/rational.hpp"

namespace bcov {

struct Grading {
  int coh_degree = 0;
  Q hodge_weight = 0;
  int parity() const { return ((coh_degree % 2) + 2) % 2; }
};

struct GradedBasis {
  std::vector<std::string> labels;
  std::vector<Grading> gradings;

  int size() const { return int(labels.size()); }
  int index_of(const std::string& label) const;  // -1 when absent
  void add(const std::string& label, Grading g);
};

// Sparse vector: basis index -> coefficient. Zero entries are never stored.
struct GradedVector {
  std::map<int, Q> coords;

  GradedVector() = default;
  static GradedVector basis(int i, const Q& c = 1);

  bool is_zero() const { return coords.empty(); }
  void add(int i, const Q& c);
  GradedVector& operator+=(const GradedVector& o);
  GradedVector& operator-=(const GradedVector& o);
  GradedVector scaled(const Q& s) const;
  bool operator==(const GradedVector& o) const { return coords == o.coords; }
  // Degree when all nonzero coordinates share one degree.
  std::optional<int> degree(const GradedBasis& b) const;
};

GradedVector apply(const Matrix& m, const GradedVector& v);

// Sign of reordering homogeneous factors: position j of the result holds
// factor perm[j] of the input. Returns +1 or -1.
int koszul_sign(const std::vector<int>& degrees, const std::vector<int>& perm);

struct Factor {
  int index;
  int degree;
  bool operator==(const Factor& o) const { return index == o.index && degree == o.degree; }
};

struct CanonicalMonomial {
  std::vector<Factor> factors;
  int sign = 1;  // 0 for the zero monomial
};

CanonicalMonomial canonicalize_monomial(std::vector<Factor> factors);

struct EigenPart {
  Q value;
  Matrix projector;
};

// Throws std::domain_error("spectrum not rational-semisimple") when M is not
// diagonalizable over Q. Eigenvalues are returned in increasing order.
std::vector<EigenPart> rational_eigendecomposition(const Matrix& M, long root_bound = 1000000);

// Characteristic polynomial det(x - M), coefficients c[0] + c[1] x + ... + x^n.
std::vector<Q> characteristic_polynomial(const Matrix& M);

}  // namespace bcov
