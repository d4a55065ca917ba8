#pragma once

#include <map>
#include <optional>
#include <vector>

#include "bcov/rational.hpp"

namespace bcov {

// Dense matrix; column j holds the image of basis vector j.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : r_(rows), c_(cols), a_(size_t(rows) * cols) {}
  static Matrix identity(int n);

  int rows() const { return r_; }
  int cols() const { return c_; }
  Q& operator()(int i, int j) { return a_[size_t(i) * c_ + j]; }
  const Q& operator()(int i, int j) const { return a_[size_t(i) * c_ + j]; }

  Matrix operator*(const Matrix& o) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix scaled(const Q& s) const;
  Matrix transpose() const;
  bool operator==(const Matrix& o) const;
  bool is_zero() const;

 private:
  int r_ = 0, c_ = 0;
  std::vector<Q> a_;
};

int rank(Matrix m);
std::optional<Matrix> inverse(const Matrix& m);
// basis of the column space, as columns of a matrix
Matrix column_basis(const Matrix& m);

// Sparse rows, used for the large systems in cohomology and obstruction solving.
using SparseRow = std::map<int, Q>;

struct LinearSolution {
  bool consistent = false;
  std::map<int, Q> particular;              // unknown -> value
  std::vector<std::map<int, Q>> kernel;     // basis of the homogeneous solutions
  int rank = 0;
  std::optional<int> bad_row;               // an equation witnessing inconsistency
};

// Solves sum_j A[i][j] x_j = b_i for unknowns 0..n_unknowns-1.
LinearSolution solve_sparse(const std::vector<SparseRow>& A, const std::vector<Q>& b, int n_unknowns);
int sparse_rank(std::vector<SparseRow> rows);

}  // namespace bcov
