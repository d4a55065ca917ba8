#include "bcov/virasoro.hpp"

#include <sstream>

#include "bcov/classical.hpp"

namespace bcov {

Q virasoro_factor(const DGBVModel& m, int n, int a, int k) {
  if (n == -1) return 1;
  Q c = 1;
  for (int j = k; j <= k + n; ++j) c *= hfactor(m, a, j);
  return c;
}

Matrix virasoro_matrix(const DGBVModel& m, int n, const LaurentWindow& w, bool clip) {
  const int len = w.hi - w.lo + 1, dim = m.dim() * len;
  Matrix M(dim, dim);
  for (int a = 0; a < m.dim(); ++a)
    for (int k = w.lo; k <= w.hi; ++k) {
      Q c = virasoro_factor(m, n, a, k);
      if (c == 0) continue;
      if (!w.contains(k + n)) {
        if (clip) continue;
        throw TruncationUnderflow("L_" + std::to_string(n) + " leaves the Laurent window");
      }
      M(a * len + (k + n - w.lo), a * len + (k - w.lo)) = c;
    }
  return M;
}

Report check_virasoro_relations(const DGBVModel& m, int n_max, int T) {
  Report r;
  r.title = "virasoro relations";
  LaurentWindow w{-(n_max + 1), T + n_max + 1};
  r.note("window", "[" + std::to_string(w.lo) + "," + std::to_string(w.hi) + "]");
  std::map<int, Matrix> L;
  for (int n = -1; n <= 2 * n_max; ++n) L[n] = virasoro_matrix(m, n, w, true);
  const int len = w.hi - w.lo + 1;
  int columns = 0;
  for (int n = -1; n <= n_max; ++n)
    for (int mm = -1; mm <= n_max; ++mm) {
      Matrix C = L[n] * L[mm] - L[mm] * L[n];
      if (n + mm >= -1) C = C - L[n + mm].scaled(Q(mm - n));
      std::string witness, defect;
      for (int a = 0; a < m.dim() && witness.empty(); ++a)
        for (int k = w.lo; k <= w.hi; ++k) {
          // columns whose compositions stay inside the window
          if (!w.contains(k + n) || !w.contains(k + mm) || !w.contains(k + n + mm)) continue;
          ++columns;
          for (int i = 0; i < C.rows(); ++i)
            if (C(i, a * len + (k - w.lo)) != 0) {
              witness = m.basis.labels[a] + " t^" + std::to_string(k);
              defect = to_string(C(i, a * len + (k - w.lo)));
              break;
            }
          if (!witness.empty()) break;
        }
      r.add("[L" + std::to_string(n) + ",L" + std::to_string(mm) + "]=(" + std::to_string(mm) + "-" +
                std::to_string(n) + ")L" + std::to_string(n + mm),
            witness.empty(), witness, defect);
    }
  r.note("columns checked", std::to_string(columns));
  return r;
}

FieldVec dilaton_vector(const FieldSpace& fs, int n) {
  const DGBVModel& m = *fs.model;
  if (n + 1 > fs.T) throw TruncationUnderflow("L_n(t) needs t^" + std::to_string(n + 1));
  Q c = 1;
  Q shift(m.dim_x - 3, 2);
  shift.canonicalize();
  for (int k = 0; k <= n; ++k) c *= Q(k) - shift;
  FieldVec v;
  if (c != 0) v[fs.var(m.unit, n + 1)] = c;
  return v;
}

namespace {

FieldMap ln_map(const FieldSpace& fs, int n) {
  const DGBVModel& m = *fs.model;
  FieldMap D;
  D.degree = 2 * n;
  for (int a = 0; a < m.dim(); ++a)
    for (int k = 0; k <= fs.T; ++k) {
      if (k + n < 0 || k + n > fs.T) continue;
      Q c = virasoro_factor(m, n, a, k);
      if (c != 0) D.add(fs.var(a, k), fs.var(a, k + n), c);
    }
  return D;
}

bool has_del(const DGBVModel& m) { return !m.del.is_zero(); }

}  // namespace

Report check_classical_virasoro(const Functional& F, const DGBVModel& m, int n, int n_check) {
  Report r;
  r.title = "classical virasoro n=" + std::to_string(n);
  const int N = F.bounds.N, T = F.bounds.T;
  // L_n lowers the t-power of a variable by n; classical terms have sum k = arity-3
  int n_top = std::min(N - 1, T + 3 - n);
  if (n_check < 0) n_check = n_top;
  if (n_check > n_top) throw TruncationUnderflow("classical Virasoro check needs larger N or T");
  FieldSpace fs(m, T);
  KernelFactory kf(m);
  Kernel2 V = kf.virasoro_kernel(n, 1, T);
  const Poly& F0 = F.get(0);
  Poly res = induced(ln_map(fs, n), F0);
  res -= directional(dilaton_vector(fs, n), F0);
  res += bracket(V, F0, F0).scaled(Q(1, 2));
  res = truncate_arity(res, n_check);
  Functional d;
  d.at(0) = res;
  d.prune();
  r.add("-dF/dL_n(t)+L_nF+1/2{F,F}_V=0 (n<=" + std::to_string(n_check) + ")", d.is_zero(), first_term(d, fs));
  r.note("V nonzero", V.is_zero() ? "no" : "yes");
  return r;
}

Poly trace_pairing(const DGBVModel& m) {
  Functional F3 = build_classical_bcov(m, 3, 0);
  FieldSpace fs(m, 0);
  FieldVec one{{fs.var(m.unit, 0), Q(1)}};
  return directional(one, F3.get(0));
}

VirasoroOps::VirasoroOps(const DGBVModel& m, int T, const Q& qq)
    : model(&m), fs(m, T + 2), q(qq), kf(m), T2(trace_pairing(m)) {}

FieldMap VirasoroOps::Ln_map(int n) const {
  if (n >= 0) return ln_map(fs, n);
  FieldMap D;
  D.degree = -2;
  for (int a = 0; a < model->dim(); ++a)
    for (int k = 1; k <= fs.T; ++k) D.add(fs.var(a, k), fs.var(a, k - 1), 1);
  return D;
}

FieldMap VirasoroOps::Y() const {
  Matrix Ym = kf.y_matrix(q);
  FieldMap D;
  D.degree = -2;
  for (int a = 0; a < model->dim(); ++a)
    for (int i = 0; i < model->dim(); ++i)
      if (Ym(i, a) != 0) D.add(fs.var(a, 0), fs.var(i, 0), Ym(i, a));
  return D;
}

Kernel2 VirasoroOps::V(int n) const { return kf.virasoro_kernel(n, q, fs.T); }

Op VirasoroOps::Qhat() const {
  auto Qh = fock_differential(kf, fs, q);
  return [Qh](const Functional& F) { return Qh(F); };
}

Op VirasoroOps::L(int n) const {
  if (n >= 0) {
    FieldMap D = ln_map(fs, n);
    FieldVec v = dilaton_vector(fs, n);
    Kernel2 Vn = V(n);
    return [D, v, Vn](const Functional& F) {
      Functional r = induced_derivation(D, F);
      r -= field_contraction(F, v);
      if (!Vn.is_zero()) r += contract_kernel(F, Vn).shifted(1);
      r.prune();
      return r;
    };
  }
  FieldMap tinv = Ln_map(-1), y = Y();
  FieldVec one{{fs.var(model->unit, 0), Q(1)}};
  Functional t2;
  t2.at(0) = T2;
  return [tinv, y, one, t2](const Functional& F) {
    Functional r = induced_derivation(tinv, F);
    r -= field_contraction(F, one);
    r += induced_derivation(y, F);
    r += multiply(t2, F).shifted(-1);
    r.prune();
    return r;
  };
}

Op VirasoroOps::U(int n) const {
  if (n <= 0) return op_zero();
  if (n - 1 > fs.T) throw TruncationUnderflow("U_n needs t^(n-1)");
  Matrix M = kf.u_matrix(q);
  FieldMap D;
  D.degree = -1;
  for (int a = 0; a < model->dim(); ++a) {
    Q c = 1;
    for (int j = -1; j <= n - 1; ++j) c *= hfactor(*model, a, j);
    if (c == 0) continue;
    for (int i = 0; i < model->dim(); ++i)
      if (M(i, a) != 0) D.add(fs.var(a, 0), fs.var(i, n - 1), M(i, a) * c);
  }
  return [D](const Functional& F) { return induced_derivation(D, F); };
}

Functional VirasoroOps::apply_exp(int n, const Functional& F) const {
  if (n >= 0) {
    Functional r = L(n)(F);
    Kernel2 Vn = V(n);
    if (!Vn.is_zero()) r += kernel_bracket(F, F, Vn).scaled(Q(1, 2));
    r.prune();
    return r;
  }
  Functional r = induced_derivation(Ln_map(-1), F);
  r -= field_contraction(F, FieldVec{{fs.var(model->unit, 0), Q(1)}});
  r += induced_derivation(Y(), F);
  r.at(0) += T2;
  r.prune();
  return r;
}

Report check_homotopic_virasoro(const DGBVModel& m, const Q& q, int n_max, const Bounds& b) {
  Report r;
  r.title = "homotopic virasoro";
  VirasoroOps ops(m, b.T, q);
  std::vector<Var> vs;
  for (Var v : ops.fs.vars())
    if (var_t(v) <= b.T) vs.push_back(v);
  // every operator below has order <= 3
  auto inputs = monomials_up_to(vs, std::min(b.N, 3));
  r.note("inputs", std::to_string(inputs.size()));
  std::map<int, Op> L;
  for (int n = -1; n <= 2 * n_max; ++n)
    if (n + 1 <= ops.fs.T) L[n] = ops.L(n);
  Op Qh = ops.Qhat();
  int agree_nm = 0, agree_mn = 0, pairs = 0;
  for (int n = 0; n <= n_max; ++n)
    for (int mm = 0; mm <= n_max; ++mm) {
      if (!L.count(n + mm)) continue;
      Op comm = op_commutator(L[n], L[mm], false);
      auto c = compare_operators(comm, op_scaled(L[n + mm], Q(n - mm)), inputs, ops.fs);
      std::string id = "[L" + std::to_string(n) + "[q],L" + std::to_string(mm) + "[q]]=(" + std::to_string(n) + "-" +
                       std::to_string(mm) + ")L" + std::to_string(n + mm) + "[q]";
      r.add(id, c.ok, c.witness, c.defect);
      if (n != mm) {
        auto c2 = compare_operators(comm, op_scaled(L[n + mm], Q(mm - n)), inputs, ops.fs);
        ++pairs;
        agree_nm += c.ok;
        agree_mn += c2.ok;
      }
    }
  r.note("effective sign", "(n-m) holds on " + std::to_string(agree_nm) + "/" + std::to_string(pairs) +
                               " pairs, (m-n) on " + std::to_string(agree_mn) + "/" + std::to_string(pairs));
  for (int n = 0; n <= n_max; ++n) {
    if (!L.count(n)) continue;
    Op lhs = op_commutator(L[n], L[-1], false);
    Op rhs = op_sum({op_scaled(L[n - 1], Q(n + 1)), op_commutator(Qh, ops.U(n), true)});
    auto c = compare_operators(lhs, rhs, inputs, ops.fs);
    r.add("[L" + std::to_string(n) + "[q],L-1[q]]=" + std::to_string(n + 1) + "L" + std::to_string(n - 1) +
              "[q]+[Qhat,U" + std::to_string(n) + "]",
          c.ok, c.witness, c.defect);
  }
  for (int n = -1; n <= n_max; ++n) {
    if (!L.count(n)) continue;
    auto c = compare_operators(op_commutator(Qh, L[n], false), op_zero(), inputs, ops.fs);
    r.add("[Qhat,L" + std::to_string(n) + "[q]]=0", c.ok, c.witness, c.defect);
  }
  return r;
}

Report check_virasoro_kernels(const DGBVModel& m, const Q& q, int n_max, int T) {
  Report r;
  r.title = "virasoro kernels";
  KernelFactory kf(m);
  for (int n = -1; n <= n_max; ++n) {
    try {
      Kernel2 V = kf.virasoro_kernel(n, q, T);
      if (n <= 0)
        r.add("V" + std::to_string(n) + "=0", V.is_zero(), "", V.is_zero() ? "" : std::to_string(V.upper.size()) + " entries");
      else {
        r.add("V" + std::to_string(n) + " graded symmetric", true);
        r.note("V" + std::to_string(n) + " entries", std::to_string(V.upper.size()));
      }
    } catch (const std::domain_error& e) {
      r.add("V" + std::to_string(n) + " graded symmetric", false, "", e.what());
    }
  }
  return r;
}

Report check_effective_inverse(const DGBVModel& m, const Q& q, int T) {
  Report r;
  r.title = "effective inverse";
  KernelFactory kf(m);
  LaurentKernel W = kf.omega_inverse(q, T + 1);
  LaurentMap Qm = [&m](int a, int k) {
    std::vector<std::tuple<int, int, Q>> out;
    for (int i = 0; i < m.dim(); ++i) {
      if (m.d_bar(i, a) != 0) out.emplace_back(i, k, m.d_bar(i, a));
      if (m.del(i, a) != 0) out.emplace_back(i, k + 1, m.del(i, a));
    }
    return out;
  };
  Tensor2 left = positive_part(m, apply_left(W, Qm), T);
  Tensor2 both = left;
  for (auto& [k, v] : positive_part(m, apply_right(m, W, Qm, 1), T)) both[k] += v;
  auto clean = [](Tensor2 t) {
    for (auto it = t.begin(); it != t.end();) it = it->second == 0 ? t.erase(it) : std::next(it);
    return t;
  };
  left = clean(left);
  both = clean(both);
  Tensor2 D = kf.delta_kernel(q).full(), minusD;
  for (auto& [k, v] : D) minusD[k] = -v;
  auto describe = [&](const Tensor2& t) {
    if (t.empty()) return std::string("0");
    if (t == D) return std::string("D(q)");
    if (t == minusD) return std::string("-D(q)");
    return std::string("other");
  };
  r.note("[(Q(x)1)w^-1]_+", describe(left));
  r.note("[(Q(x)1+1(x)Q)w^-1]_+", describe(both));
  r.add("[(Q(x)1)w^-1]_+ = -D(q)", left == minusD, "", left == minusD ? "" : describe(left));
  return r;
}

}  // namespace bcov
