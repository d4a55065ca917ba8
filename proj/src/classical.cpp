#include "bcov/classical.hpp"

#include <algorithm>

#include "bcov/kernels.hpp"

namespace bcov {

Q multinomial(const std::vector<int>& ks) {
  mpz_class r = 1;
  int n = 0;
  for (int k : ks) {
    for (int j = 1; j <= k; ++j) r = r * (n + j) / j;
    n += k;
  }
  return Q(r);
}

namespace {

Q derivative_norm(const Mono& u) {
  // d_{x_1} ... d_{x_n} applied to x_1 ... x_n
  Mono cur = u, nxt;
  Q s = 1;
  for (auto it = u.rbegin(); it != u.rend(); ++it) {
    s *= mono_deriv(*it, cur, nxt);
    cur.swap(nxt);
  }
  return s;
}

struct Builder {
  const DGBVModel& m;
  std::vector<Var> vars;
  Functional* out;
  std::vector<TableRow>* rows;
  const FieldSpace* fs;

  void rec(std::size_t start, Mono& cur, const GradedVector& prod, int ksum, int n) {
    if (int(cur.size()) == n) {
      if (ksum != n - 3) return;
      Q tr = m.tr(prod);
      if (tr == 0) return;
      std::vector<int> ks;
      for (Var v : cur) ks.push_back(var_t(v));
      Q mult = multinomial(ks);
      Q val = mult * tr;
      out->at(0).add(cur, val / derivative_norm(cur));
      if (rows) {
        TableRow r;
        for (Var v : cur) r.inputs.push_back(fs->label(v));
        r.ks = ks;
        r.multinomial = mult;
        r.trace = tr;
        r.value = val;
        rows->push_back(std::move(r));
      }
      return;
    }
    for (std::size_t i = start; i < vars.size(); ++i) {
      Var v = vars[i];
      if (ksum + var_t(v) > n - 3) continue;
      if (!cur.empty() && cur.back() == v && var_parity(v)) continue;
      GradedVector np = cur.empty() ? GradedVector::basis(var_alg(v)) : m.mul(prod, GradedVector::basis(var_alg(v)));
      if (np.is_zero()) continue;
      cur.push_back(v);
      rec(i, cur, np, ksum + var_t(v), n);
      cur.pop_back();
    }
  }
};

}  // namespace

Functional build_classical_bcov(const DGBVModel& m, int N_max, int T) {
  if (N_max < 3) throw std::invalid_argument("classical BCOV needs N_max >= 3");
  if (T < 0) throw std::invalid_argument("T must be >= 0");
  FieldSpace fs(m, T);
  Functional F;
  F.bounds = {0, N_max, T};
  Builder b{m, fs.vars(), &F, nullptr, &fs};
  std::sort(b.vars.begin(), b.vars.end());
  for (int n = 3; n <= N_max; ++n) {
    Mono cur;
    b.rec(0, cur, {}, 0, n);
  }
  F.prune();
  return F;
}

std::vector<TableRow> classical_table(const DGBVModel& m, int n_max) {
  int T = std::max(0, n_max - 3);
  FieldSpace fs(m, T);
  Functional F;
  std::vector<TableRow> rows;
  Builder b{m, fs.vars(), &F, &rows, &fs};
  std::sort(b.vars.begin(), b.vars.end());
  for (int n = 3; n <= n_max; ++n) {
    Mono cur;
    b.rec(0, cur, {}, 0, n);
  }
  return rows;
}

Report check_classical_master_equation(const Functional& F, const DGBVModel& m) {
  Report rep;
  rep.title = "classical master equation";
  const int N = F.bounds.N, T = F.bounds.T;
  FieldSpace fs(m, T);
  bool exact_del = true;
  for (int i = 0; i < m.dim() && exact_del; ++i)
    for (int j = 0; j < m.dim(); ++j)
      if (m.del(i, j) != 0) exact_del = false;
  // t del needs t-powers one above the stored window once arity exceeds T+3
  int n_top = exact_del ? N : std::min(N, T + 3);
  const Poly& F0 = F.get(0);
  Poly res = induced(q_map(fs), F0);
  res += bracket(kernel_of(m, m.del), F0, F0).scaled(Q(1, 2));
  res = truncate_arity(res, n_top);
  Functional r;
  r.by_genus[0] = res;
  rep.add("QF + 1/2{F,F} = 0 (arity <= " + std::to_string(n_top) + ")", res.is_zero(), first_term(r, fs),
          std::to_string(res.size()) + " nonzero terms");
  rep.note("max arity checked", std::to_string(n_top));
  return rep;
}

Report check_string_equation(const Functional& F, const DGBVModel& m) {
  Report rep;
  rep.title = "string equation";
  const int N = F.bounds.N, T = F.bounds.T;
  FieldSpace fs(m, T);
  FieldMap tinv;
  for (int a = 0; a < m.dim(); ++a)
    for (int k = 1; k <= T; ++k) tinv.add(fs.var(a, k), fs.var(a, k - 1), 1);
  const Poly& F0 = F.get(0);
  Poly lhs = deriv(fs.var(m.unit, 0), F0);
  Poly rhs = induced(tinv, F0);
  for (int n = 3; n <= N - 1; ++n) {
    Poly d = arity_part(lhs, n) - arity_part(rhs, n);
    Functional w;
    w.by_genus[0] = d;
    rep.add("D_{n+1}F(1,...) = sum D_nF(..t^{k-1}..), n=" + std::to_string(n), d.is_zero(), first_term(w, fs));
  }
  Poly two = arity_part(lhs, 2);
  bool pairing_ok = true;
  for (int a = 0; a < m.dim() && pairing_ok; ++a)
    for (int b = 0; b < m.dim(); ++b) {
      Q v = evaluate(two, {{{fs.var(a, 0), 1}}, {{fs.var(b, 0), 1}}});
      if (v != m.pairing(a, b)) {
        pairing_ok = false;
        break;
      }
    }
  rep.add("d/d(1) D_3F = trace pairing", pairing_ok);
  return rep;
}

Report check_dilaton_equation(const Functional& F, const DGBVModel& m) {
  Report rep;
  rep.title = "dilaton equation";
  const int N = F.bounds.N, T = F.bounds.T;
  if (T < 1) {
    rep.skip("dilaton", "needs T >= 1");
    return rep;
  }
  FieldSpace fs(m, T);
  const Poly& F0 = F.get(0);
  Poly lhs = deriv(fs.var(m.unit, 1), F0);
  for (int n = 3; n <= N - 1; ++n) {
    Poly d = arity_part(lhs, n) - arity_part(F0, n).scaled(n - 2);
    Functional w;
    w.by_genus[0] = d;
    rep.add("D_{n+1}F(t,...) = (n-2) D_nF, n=" + std::to_string(n), d.is_zero(), first_term(w, fs));
  }
  return rep;
}

Report check_classical_gradings(const Functional& F, const DGBVModel& m) {
  Report rep;
  rep.title = "classical gradings";
  FieldSpace fs(m, F.bounds.T);
  const int d = m.dim_x;
  std::string bad_support, bad_deg, bad_wt;
  for (auto& [u, c] : F.get(0).terms) {
    int ks = 0;
    for (Var v : u) ks += var_t(v);
    if (ks != int(u.size()) - 3 && bad_support.empty()) bad_support = mono_label(fs, u);
    if (functional_degree(fs, u) != 6 - 2 * d && bad_deg.empty()) bad_deg = mono_label(fs, u);
    if (functional_weight(fs, u) != -(d - 3) && bad_wt.empty()) bad_wt = mono_label(fs, u);
  }
  rep.add("support sum k = n-3", bad_support.empty(), bad_support);
  rep.add("degree 6-2d = " + std::to_string(6 - 2 * d), bad_deg.empty(), bad_deg);
  rep.add("Hodge weight -(d-3) = " + std::to_string(3 - d), bad_wt.empty(), bad_wt);
  return rep;
}

}  // namespace bcov
