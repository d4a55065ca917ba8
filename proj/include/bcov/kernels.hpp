#pragma once

#include <tuple>

#include "bcov/functional.hpp"

namespace bcov {

// h(a,j) = j + (wt_a + 1) - (d-1)/2, the grading operator H on e_a t^j.
Q hfactor(const DGBVModel& m, int a, int j);

// sum_a (O e_a) t^k1 (x) e^a t^k2 with e^a the left dual basis for Tr(ab).
Tensor2 kernel_tensor(const DGBVModel& m, const Matrix& O, int k1 = 0, int k2 = 0);
Kernel2 kernel_of(const DGBVModel& m, const Matrix& O);

// Two-tensor on the Laurent window, entries keyed by (a,k,b,l) for e_a t^k (x) e_b t^l.
struct LaurentKernel {
  std::map<std::tuple<int, int, int, int>, Q> e;
  void add(int a, int k, int b, int l, const Q& c);
  bool operator==(const LaurentKernel& o) const { return e == o.e; }
};

// Linear map on Laurent fields: (a,k) -> list of ((b,l), c).
using LaurentMap = std::function<std::vector<std::tuple<int, int, Q>>(int a, int k)>;

LaurentKernel apply_left(const LaurentKernel& K, const LaurentMap& A);
// (1 (x) A)(x (x) y) = (-1)^(|A| |x|) x (x) A y
LaurentKernel apply_right(const DGBVModel& m, const LaurentKernel& K, const LaurentMap& A, int parity_A);
// keep entries with 0 <= k,l <= T
Tensor2 positive_part(const DGBVModel& m, const LaurentKernel& K, int T);

class KernelFactory {
 public:
  explicit KernelFactory(const DGBVModel& m);

  const DGBVModel& model() const { return *m_; }
  const HodgeData& hodge() const { return hd_; }

  // e^{-L Laplacian} with q = e^{-L}; eigenvalues must be integers unless q is 0 or 1.
  Matrix heat(const Q& q) const;
  Kernel2 heat_kernel(const Q& q) const;
  Kernel2 delta_kernel(const Q& q) const;
  Kernel2 propagator(const Q& q1, const Q& q2) const;
  // sum_{lambda>0} (1-q^lambda)/lambda * d_bar^* del pi_lambda
  Matrix y_matrix(const Q& q) const;
  // sum_{lambda>0} (1-q^lambda)/lambda * d_bar^* pi_lambda
  Matrix u_matrix(const Q& q) const;
  // sum_{k=-T-1}^{T} K_q (-t)^k (x) t^{-k-1}
  LaurentKernel omega_inverse(const Q& q, int T) const;
  // +[(L_n (x) 1) omega^{-1}(q)]_+
  Kernel2 virasoro_kernel(int n, const Q& q, int T) const;
  // delta part of the twisted propagator: -sum_{lambda>0} c_lambda [(d_bar^* L_n (x) 1) omega_lambda^{-1}]_+
  Kernel2 twisted_propagator_delta(int n, const Q& q1, const Q& q2, int T) const;

 private:
  Q qpow(const Q& q, const Q& lambda) const;
  const DGBVModel* m_;
  HodgeData hd_;
};

// Q = d_bar + t del on E_T (t del dropped past T)
FieldMap q_map(const FieldSpace& fs);

}  // namespace bcov
