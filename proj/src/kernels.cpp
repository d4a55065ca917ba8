#include "bcov/kernels.hpp"

#include <stdexcept>

namespace bcov {

Q hfactor(const DGBVModel& m, int a, int j) {
  Q half(m.dim_x - 1, 2);
  half.canonicalize();
  return Q(j) + m.weight(a) + 1 - half;
}

Tensor2 kernel_tensor(const DGBVModel& m, const Matrix& O, int k1, int k2) {
  auto X = inverse(m.pairing_matrix());
  if (!X) throw std::domain_error("pairing is degenerate");
  const int n = m.dim();
  Tensor2 t;
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) {
      if (O(i, a) == 0) continue;
      for (int b = 0; b < n; ++b) {
        if ((*X)(a, b) == 0) continue;
        Q& v = t[{field_var(i, k1, m.parity(i)), field_var(b, k2, m.parity(b))}];
        v += O(i, a) * (*X)(a, b);
      }
    }
  for (auto it = t.begin(); it != t.end();) it = it->second == 0 ? t.erase(it) : std::next(it);
  return t;
}

Kernel2 kernel_of(const DGBVModel& m, const Matrix& O) { return compress(kernel_tensor(m, O)); }

void LaurentKernel::add(int a, int k, int b, int l, const Q& c) {
  if (c == 0) return;
  Q& v = e[{a, k, b, l}];
  v += c;
  if (v == 0) e.erase({a, k, b, l});
}

LaurentKernel apply_left(const LaurentKernel& K, const LaurentMap& A) {
  LaurentKernel r;
  for (auto& [key, c] : K.e) {
    auto [a, k, b, l] = key;
    for (auto& [a2, k2, v] : A(a, k)) r.add(a2, k2, b, l, c * v);
  }
  return r;
}

LaurentKernel apply_right(const DGBVModel& m, const LaurentKernel& K, const LaurentMap& A, int parity_A) {
  LaurentKernel r;
  for (auto& [key, c] : K.e) {
    auto [a, k, b, l] = key;
    Q s = ((parity_A & m.parity(a)) != 0) ? Q(-c) : c;
    for (auto& [b2, l2, v] : A(b, l)) r.add(a, k, b2, l2, s * v);
  }
  return r;
}

Tensor2 positive_part(const DGBVModel& m, const LaurentKernel& K, int T) {
  Tensor2 t;
  for (auto& [key, c] : K.e) {
    auto [a, k, b, l] = key;
    if (k < 0 || l < 0 || k > T || l > T) continue;
    t[{field_var(a, k, m.parity(a)), field_var(b, l, m.parity(b))}] += c;
  }
  return t;
}

KernelFactory::KernelFactory(const DGBVModel& m) : m_(&m), hd_(hodge_data(m)) {}

Q KernelFactory::qpow(const Q& q, const Q& lambda) const {
  if (lambda == 0) return 1;
  if (q == 0) return 0;
  if (q == 1) return 1;
  if (lambda.get_den() != 1) throw std::domain_error("non-integer Laplacian eigenvalue " + to_string(lambda));
  return pow_int(q, lambda.get_num().get_si());
}

Matrix KernelFactory::heat(const Q& q) const {
  if (q < 0 || q > 1) throw std::invalid_argument("scale q must lie in [0,1]");
  const int n = m_->dim();
  Matrix H(n, n);
  for (auto& p : hd_.spectrum) H = H + p.projector.scaled(qpow(q, p.value));
  return H;
}

Kernel2 KernelFactory::heat_kernel(const Q& q) const { return kernel_of(*m_, heat(q)); }

Kernel2 KernelFactory::delta_kernel(const Q& q) const { return kernel_of(*m_, m_->del * heat(q)); }

Kernel2 KernelFactory::propagator(const Q& q1, const Q& q2) const {
  if (q2 > q1) throw std::invalid_argument("reversed scales");
  if (q2 < 0 || q1 > 1) throw std::invalid_argument("scale q must lie in [0,1]");
  const int n = m_->dim();
  Matrix O(n, n);
  Matrix base = hd_.d_bar_adjoint * m_->del;
  for (auto& p : hd_.spectrum) {
    if (p.value == 0) continue;
    Q c = (qpow(q1, p.value) - qpow(q2, p.value)) / p.value;
    if (c != 0) O = O + (base * p.projector).scaled(c);
  }
  return kernel_of(*m_, O);
}

Matrix KernelFactory::y_matrix(const Q& q) const {
  const int n = m_->dim();
  Matrix O(n, n);
  Matrix base = hd_.d_bar_adjoint * m_->del;
  for (auto& p : hd_.spectrum) {
    if (p.value == 0) continue;
    O = O + (base * p.projector).scaled((1 - qpow(q, p.value)) / p.value);
  }
  return O;
}

Matrix KernelFactory::u_matrix(const Q& q) const {
  const int n = m_->dim();
  Matrix O(n, n);
  for (auto& p : hd_.spectrum) {
    if (p.value == 0) continue;
    O = O + (hd_.d_bar_adjoint * p.projector).scaled((1 - qpow(q, p.value)) / p.value);
  }
  return O;
}

namespace {

LaurentKernel omega_from(const DGBVModel& m, const Matrix& H, int T) {
  LaurentKernel r;
  for (auto& [ij, c] : kernel_tensor(m, H)) {
    int a = var_alg(ij.first), b = var_alg(ij.second);
    for (int k = -T - 1; k <= T; ++k) r.add(a, k, b, -k - 1, (k & 1) ? Q(-c) : c);
  }
  return r;
}

LaurentMap virasoro_map(const DGBVModel& m, int n) {
  return [&m, n](int a, int k) {
    std::vector<std::tuple<int, int, Q>> out;
    if (n == -1) {
      out.emplace_back(a, k - 1, Q(1));
      return out;
    }
    Q c = 1;
    for (int j = k; j <= k + n; ++j) c *= hfactor(m, a, j);
    if (c != 0) out.emplace_back(a, k + n, c);
    return out;
  };
}

}  // namespace

LaurentKernel KernelFactory::omega_inverse(const Q& q, int T) const { return omega_from(*m_, heat(q), T); }

Kernel2 KernelFactory::virasoro_kernel(int n, const Q& q, int T) const {
  if (n - 1 > T) throw TruncationUnderflow("Virasoro kernel needs T >= n-1");
  LaurentKernel w = omega_inverse(q, T + n + 1);
  return compress(positive_part(*m_, apply_left(w, virasoro_map(*m_, n)), T));
}

Kernel2 KernelFactory::twisted_propagator_delta(int n, const Q& q1, const Q& q2, int T) const {
  if (q2 > q1) throw std::invalid_argument("reversed scales");
  const DGBVModel& m = *m_;
  const Matrix& dbs = hd_.d_bar_adjoint;
  LaurentKernel acc;
  for (auto& p : hd_.spectrum) {
    if (p.value == 0) continue;
    Q c = (qpow(q1, p.value) - qpow(q2, p.value)) / p.value;
    if (c == 0) continue;
    LaurentKernel w = apply_left(omega_from(m, p.projector, T + n + 2), virasoro_map(m, n));
    LaurentMap star = [&](int a, int k) {
      std::vector<std::tuple<int, int, Q>> out;
      for (int i = 0; i < m.dim(); ++i)
        if (dbs(i, a) != 0) out.emplace_back(i, k, dbs(i, a));
      return out;
    };
    for (auto& [key, v] : apply_left(w, star).e) {
      auto [a, k, b, l] = key;
      acc.add(a, k, b, l, -c * v);
    }
  }
  return compress(positive_part(m, acc, T));
}

FieldMap q_map(const FieldSpace& fs) {
  const DGBVModel& m = *fs.model;
  FieldMap D;
  D.degree = 1;
  for (int a = 0; a < m.dim(); ++a)
    for (int k = 0; k <= fs.T; ++k)
      for (int i = 0; i < m.dim(); ++i) {
        if (m.d_bar(i, a) != 0) D.add(fs.var(a, k), fs.var(i, k), m.d_bar(i, a));
        if (m.del(i, a) != 0 && k + 1 <= fs.T) D.add(fs.var(a, k), fs.var(i, k + 1), m.del(i, a));
      }
  return D;
}

}  // namespace bcov
