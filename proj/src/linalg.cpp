#include "bcov/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace bcov {

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (c_ != o.r_) throw std::invalid_argument("matrix shape mismatch");
  Matrix r(r_, o.c_);
  for (int i = 0; i < r_; ++i)
    for (int k = 0; k < c_; ++k) {
      const Q& x = (*this)(i, k);
      if (x == 0) continue;
      for (int j = 0; j < o.c_; ++j)
        if (o(k, j) != 0) r(i, j) += x * o(k, j);
    }
  return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
  if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("matrix shape mismatch");
  Matrix r = *this;
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("matrix shape mismatch");
  Matrix r = *this;
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
  return r;
}

Matrix Matrix::scaled(const Q& s) const {
  Matrix r = *this;
  for (auto& x : r.a_) x *= s;
  return r;
}

Matrix Matrix::transpose() const {
  Matrix r(c_, r_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

bool Matrix::operator==(const Matrix& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }

bool Matrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const Q& x) { return x == 0; });
}

int rank(Matrix m) {
  int r = 0;
  for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
    int p = -1;
    for (int i = r; i < m.rows(); ++i)
      if (m(i, c) != 0) { p = i; break; }
    if (p < 0) continue;
    for (int j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    for (int i = r + 1; i < m.rows(); ++i) {
      if (m(i, c) == 0) continue;
      Q f = m(i, c) / m(r, c);
      for (int j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    ++r;
  }
  return r;
}

std::optional<Matrix> inverse(const Matrix& m) {
  int n = m.rows();
  if (n != m.cols()) return std::nullopt;
  Matrix a = m, inv = Matrix::identity(n);
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int i = c; i < n; ++i)
      if (a(i, c) != 0) { p = i; break; }
    if (p < 0) return std::nullopt;
    for (int j = 0; j < n; ++j) {
      std::swap(a(p, j), a(c, j));
      std::swap(inv(p, j), inv(c, j));
    }
    Q pv = a(c, c);
    for (int j = 0; j < n; ++j) { a(c, j) /= pv; inv(c, j) /= pv; }
    for (int i = 0; i < n; ++i) {
      if (i == c || a(i, c) == 0) continue;
      Q f = a(i, c);
      for (int j = 0; j < n; ++j) { a(i, j) -= f * a(c, j); inv(i, j) -= f * inv(c, j); }
    }
  }
  return inv;
}

Matrix column_basis(const Matrix& m) {
  std::vector<int> keep;
  Matrix acc(m.rows(), 0);
  int r = 0;
  for (int j = 0; j < m.cols(); ++j) {
    Matrix t(m.rows(), int(keep.size()) + 1);
    for (size_t k = 0; k < keep.size(); ++k)
      for (int i = 0; i < m.rows(); ++i) t(i, int(k)) = m(i, keep[k]);
    for (int i = 0; i < m.rows(); ++i) t(i, int(keep.size())) = m(i, j);
    int rr = rank(t);
    if (rr > r) { keep.push_back(j); r = rr; }
  }
  Matrix out(m.rows(), int(keep.size()));
  for (size_t k = 0; k < keep.size(); ++k)
    for (int i = 0; i < m.rows(); ++i) out(i, int(k)) = m(i, keep[k]);
  return out;
}

namespace {

void axpy(SparseRow& row, const Q& f, const SparseRow& piv) {
  for (auto& [c, v] : piv) {
    auto it = row.find(c);
    if (it == row.end()) {
      row.emplace(c, -f * v);
    } else {
      it->second -= f * v;
      if (it->second == 0) row.erase(it);
    }
  }
}

}  // namespace

LinearSolution solve_sparse(const std::vector<SparseRow>& A, const std::vector<Q>& b, int n_unknowns) {
  // Augmented column n_unknowns carries the right-hand side.
  const int rhs = n_unknowns;
  std::map<int, SparseRow> pivots;  // pivot column -> normalized row
  LinearSolution out;
  for (size_t i = 0; i < A.size(); ++i) {
    SparseRow row = A[i];
    if (b[i] != 0) row[rhs] = b[i];
    while (!row.empty()) {
      int c = row.begin()->first;
      if (c == rhs) break;
      auto it = pivots.find(c);
      if (it == pivots.end()) break;
      Q f = row.begin()->second;
      axpy(row, f, it->second);
    }
    if (row.empty()) continue;
    int c = row.begin()->first;
    if (c == rhs) {
      out.consistent = false;
      out.bad_row = int(i);
      out.rank = int(pivots.size());
      return out;
    }
    Q pv = row.begin()->second;
    for (auto& [k, v] : row) v /= pv;
    pivots.emplace(c, std::move(row));
  }
  out.consistent = true;
  out.rank = int(pivots.size());
  // back substitution into reduced row echelon form; rows with larger pivots are
  // already reduced, so one pass per row suffices
  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
    SparseRow& row = it->second;
    std::vector<int> cols;
    for (auto& [c, v] : row)
      if (c != it->first && c != rhs && pivots.count(c)) cols.push_back(c);
    for (int c : cols) {
      auto f = row.find(c);
      if (f == row.end()) continue;
      Q coef = f->second;
      axpy(row, coef, pivots.at(c));
    }
  }
  for (auto& [c, row] : pivots) {
    auto r = row.find(rhs);
    if (r != row.end()) out.particular[c] = r->second;
  }
  for (int f = 0; f < n_unknowns; ++f) {
    if (pivots.count(f)) continue;
    std::map<int, Q> v;
    v[f] = 1;
    for (auto& [c, row] : pivots) {
      auto r = row.find(f);
      if (r != row.end()) v[c] = -r->second;
    }
    out.kernel.push_back(std::move(v));
  }
  return out;
}

int sparse_rank(std::vector<SparseRow> rows) {
  std::map<int, SparseRow> pivots;
  for (auto& row : rows) {
    while (!row.empty()) {
      auto it = pivots.find(row.begin()->first);
      if (it == pivots.end()) break;
      Q f = row.begin()->second;
      axpy(row, f, it->second);
    }
    if (row.empty()) continue;
    Q pv = row.begin()->second;
    for (auto& [k, v] : row) v /= pv;
    int c = row.begin()->first;
    pivots.emplace(c, std::move(row));
  }
  return int(pivots.size());
}

}  // namespace bcov
