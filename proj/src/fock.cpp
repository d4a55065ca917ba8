#include "bcov/fock.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

namespace bcov {

Functional FockDifferential::operator()(const Functional& F) const {
  Functional r = induced_derivation(Q, F);
  if (!D.is_zero()) r += contract_kernel(F, D).shifted(1);
  r.prune();
  return r;
}

FockDifferential fock_differential(const KernelFactory& kf, const FieldSpace& fs, const Q& q) {
  return {q_map(fs), kf.delta_kernel(q)};
}

Functional qme_defect(const FockDifferential& Qh, const Functional& F) {
  Functional r = Qh(F);
  r += kernel_bracket(F, F, Qh.D).scaled(Q(1, 2));
  r.prune();
  return r;
}

Functional exp_contract(const Functional& F, const Kernel2& K, const Q& sign) {
  Functional r = F, term = F;
  for (int j = 1; !term.is_zero(); ++j) {
    term = contract_kernel(term, K).shifted(1).scaled(sign / Q(j));
    r += term;
  }
  r.prune();
  return r;
}

OpComparison compare_operators(const Op& A, const Op& B, const std::vector<Mono>& inputs, const FieldSpace& fs) {
  OpComparison c;
  for (auto& u : inputs) {
    Functional F;
    F.at(0).add(u, 1);
    Functional d = A(F) - B(F);
    d.prune();
    ++c.tested;
    if (!d.is_zero()) {
      c.ok = false;
      c.witness = mono_label(fs, u);
      c.defect = first_term(d, fs);
      return c;
    }
  }
  return c;
}

Op op_sum(std::vector<Op> ops) {
  return [ops](const Functional& F) {
    Functional r;
    r.bounds = F.bounds;
    for (auto& o : ops) r += o(F);
    r.prune();
    return r;
  };
}

Op op_scaled(Op A, const Q& c) {
  return [A, c](const Functional& F) { return A(F).scaled(c); };
}

Op op_commutator(Op A, Op B, bool both_odd) {
  return [A, B, both_odd](const Functional& F) {
    Functional r = A(B(F));
    if (both_odd)
      r += B(A(F));
    else
      r -= B(A(F));
    r.prune();
    return r;
  };
}

Op op_zero() {
  return [](const Functional& F) {
    Functional r;
    r.bounds = F.bounds;
    return r;
  };
}

namespace {

std::string qstr(const Q& q) { return to_string(q); }

// operator checks use a field space one step wider so nothing is clipped
std::vector<Mono> inputs_at(const FieldSpace& fs, int T, int n_max) {
  std::vector<Var> vs;
  for (Var v : fs.vars())
    if (var_t(v) <= T) vs.push_back(v);
  return monomials_up_to(vs, n_max);
}

}  // namespace

Report check_fock_nilpotence(const DGBVModel& m, const Bounds& b, const std::vector<Q>& scales) {
  Report r;
  r.title = "fock nilpotence";
  KernelFactory kf(m);
  FieldSpace fs(m, b.T);
  auto inputs = inputs_at(fs, b.T, b.N);
  r.note("inputs", std::to_string(inputs.size()));
  for (auto& q : scales) {
    auto Qh = fock_differential(kf, fs, q);
    Op sq = [&](const Functional& F) { return Qh(Qh(F)); };
    auto c = compare_operators(sq, op_zero(), inputs, fs);
    r.add("qhat^2=0@q=" + qstr(q), c.ok, c.witness, c.defect);
    // Delta_q^2 and [Q, Delta_q] separately
    Op dd = [&](const Functional& F) { return contract_kernel(contract_kernel(F, Qh.D), Qh.D); };
    auto c2 = compare_operators(dd, op_zero(), inputs, fs);
    r.add("delta^2=0@q=" + qstr(q), c2.ok, c2.witness, c2.defect);
  }
  return r;
}

Report check_conjugation_lemma(const DGBVModel& m, const Q& q1, const Q& q2, const Bounds& b) {
  Report r;
  r.title = "conjugation lemma";
  KernelFactory kf(m);
  FieldSpace fs(m, b.T);
  Kernel2 P = kf.propagator(q1, q2);
  auto Q1 = fock_differential(kf, fs, q1);
  auto Q2 = fock_differential(kf, fs, q2);
  Op XQ = [&](const Functional& F) { return induced_derivation(Q1.Q, F); };
  Op dP = [&](const Functional& F) { return contract_kernel(F, P); };
  Op D1 = [&](const Functional& F) { return contract_kernel(F, Q1.D); };
  Op D2 = [&](const Functional& F) { return contract_kernel(F, Q2.D); };
  auto low = inputs_at(fs, b.T, std::min(2, b.N));
  auto c = compare_operators(op_commutator(XQ, dP, false), op_sum({D1, op_scaled(D2, -1)}), low, fs);
  r.add("[Q,dP]=D(q1)-D(q2)", c.ok, c.witness, c.defect);
  Op conj = [&](const Functional& F) { return exp_contract(Q1(exp_contract(F, P, -1)), P, 1); };
  Op rhs = [&](const Functional& F) { return Q2(F); };
  auto all = inputs_at(fs, b.T, b.N);
  auto c2 = compare_operators(conj, rhs, all, fs);
  r.add("e^{hP} Qhat(q1) e^{-hP} = Qhat(q2)", c2.ok, c2.witness, c2.defect);
  r.note("inputs", std::to_string(all.size()));
  return r;
}

Report check_fock_cohomology_invariance(const std::vector<DGBVModel>& metrics, const std::vector<Q>& scales,
                                        const Bounds& b, std::vector<CohomologyDims>* dims) {
  Report r;
  r.title = "fock cohomology";
  std::vector<CohomologyDims> out;
  for (auto& m : metrics) {
    KernelFactory kf(m);
    FieldSpace fs(m, b.T);
    // basis: hbar^g x monomial with n + 2g <= N, g <= G; g > G is a subcomplex, dropped
    std::vector<std::pair<int, Mono>> basis;
    for (int g = 0; g <= b.G && 2 * g <= b.N; ++g)
      for (auto& u : monomials_up_to(fs.vars(), b.N - 2 * g)) basis.emplace_back(g, u);
    auto key_of = [&](int g, const Mono& u) {
      int mode = 0;
      for (Var v : u) mode += fs.mode(v);
      return std::make_tuple(int(u.size()) + 2 * g, mode);
    };
    std::map<std::tuple<int, int>, std::map<std::pair<int, Mono>, int>> blocks;
    for (auto& e : basis) {
      auto& blk = blocks[key_of(e.first, e.second)];
      int id = int(blk.size());
      blk[e] = id;
    }
    for (auto& q : scales) {
      auto Qh = fock_differential(kf, fs, q);
      long total = 0, dimH = 0;
      for (auto& [key, blk] : blocks) {
        std::vector<SparseRow> rows;
        for (auto& [e, id] : blk) {
          Functional F;
          F.at(e.first).add(e.second, 1);
          Functional img = Qh(F);
          SparseRow row;
          for (auto& [g, p] : img.by_genus) {
            if (g > b.G) continue;
            for (auto& [u, c] : p.terms) {
              auto it = blk.find({g, u});
              if (it == blk.end()) throw std::logic_error("cohomology block not closed");
              row[it->second] += c;
            }
          }
          if (!row.empty()) rows.push_back(std::move(row));
        }
        int rk = sparse_rank(rows);
        total += long(blk.size());
        dimH += long(blk.size()) - 2L * rk;
      }
      out.push_back({m.name, q, total, dimH});
    }
  }
  bool same = true;
  for (auto& d : out) same = same && d.dim == out.front().dim && d.total == out.front().total;
  std::ostringstream w;
  for (auto& d : out) w << d.model << "@q=" << to_string(d.q) << ":" << d.dim << "/" << d.total << " ";
  std::string ws = w.str();
  if (!ws.empty()) ws.pop_back();
  r.add("dim H equal", same && !out.empty(), same ? "" : ws);
  r.note("dims", ws);
  if (dims) *dims = out;
  return r;
}

Functional GenericFock::operator()(const Functional& F) const {
  Functional r = induced_derivation(dL, F);
  if (!P.is_zero()) r += contract_kernel(F, P).shifted(1);
  r.prune();
  return r;
}

std::string GenericFock::label(Var v) const { return labels.at(var_alg(v)); }

namespace {

int column_degree(const SymplecticData& s, const Matrix& B, int j) {
  int deg = 0;
  bool seen = false;
  for (int i = 0; i < B.rows(); ++i) {
    if (B(i, j) == 0) continue;
    if (seen && s.degrees[i] != deg) throw std::invalid_argument("inhomogeneous basis vector");
    deg = s.degrees[i];
    seen = true;
  }
  if (!seen) throw std::invalid_argument("zero basis vector");
  return deg;
}

}  // namespace

GenericFock generic_fock_differential(const SymplecticData& s) {
  const int n = int(s.labels.size());
  if (s.omega.rows() != n || s.omega.cols() != n || s.d.rows() != n || s.d.cols() != n ||
      int(s.degrees.size()) != n || s.L.rows() != n || s.Lprime.rows() != n)
    throw std::invalid_argument("dimension mismatch");
  auto sgn = [](int e) { return (e & 1) ? -1 : 1; };
  if (!inverse(s.omega)) throw std::invalid_argument("omega degenerate");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (s.omega(i, j) != -sgn(s.degrees[i] * s.degrees[j]) * s.omega(j, i))
        throw std::invalid_argument("omega not graded antisymmetric");
      if (s.omega(i, j) != 0 && s.degrees[i] + s.degrees[j] != 0) throw std::invalid_argument("omega not of degree 0");
      if (s.d(i, j) != 0 && s.degrees[i] != s.degrees[j] + 1) throw std::invalid_argument("d not of degree 1");
    }
  if (!(s.d * s.d).is_zero()) throw std::invalid_argument("d squared nonzero");
  // omega(d v, w) + (-1)^|v| omega(v, d w) = 0
  Matrix skew = s.d.transpose() * s.omega;
  Matrix sd = s.omega * s.d;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (skew(i, j) + sgn(s.degrees[i]) * sd(i, j) != 0) throw std::invalid_argument("d not skew for omega");
  const int nl = s.L.cols();
  if (2 * nl != n || s.Lprime.cols() != nl) throw std::invalid_argument("L and L' must be half-dimensional");
  Matrix B(n, n);
  std::vector<int> deg(n);
  for (int j = 0; j < n; ++j) {
    const Matrix& src = j < nl ? s.L : s.Lprime;
    int c = j < nl ? j : j - nl;
    for (int i = 0; i < n; ++i) B(i, j) = src(i, c);
    deg[j] = column_degree(s, B, j);
  }
  auto Binv = inverse(B);
  if (!Binv) throw std::invalid_argument("L and L' not complementary");
  Matrix w = B.transpose() * s.omega * B;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      bool li = i < nl, lj = j < nl;
      if (li && lj && w(i, j) != 0) throw std::invalid_argument("L not Lagrangian");
      if (!li && !lj && w(i, j) != 0) throw std::invalid_argument("L' not Lagrangian");
    }
  Matrix dd = *Binv * s.d * B;
  for (int i = nl; i < n; ++i)
    for (int j = 0; j < nl; ++j)
      if (dd(i, j) != 0) throw std::invalid_argument("L not a subcomplex");
  GenericFock f;
  for (int j = 0; j < nl; ++j) {
    std::ostringstream lab;
    bool first = true;
    for (int i = 0; i < n; ++i) {
      if (B(i, j) == 0) continue;
      if (!first) lab << "+";
      if (B(i, j) != 1) lab << to_string(B(i, j)) << "*";
      lab << s.labels[i];
      first = false;
    }
    f.labels.push_back(lab.str());
    f.degrees.push_back(deg[j]);
  }
  auto var = [&](int j) { return field_var(j, 0, deg[j] & 1); };
  f.dL.degree = 1;
  for (int j = 0; j < nl; ++j)
    for (int i = 0; i < nl; ++i)
      if (dd(i, j) != 0) f.dL.add(var(j), var(i), dd(i, j));
  // omega^{-1} = sum_a e_a (x) e^a, omega(e^a, e_b) = delta_ab; X column a = e^a
  Matrix X = inverse(w)->transpose();
  Tensor2 t;
  for (int i = 0; i < nl; ++i)
    for (int c = 0; c < nl; ++c) {
      Q v = 0;
      for (int a = 0; a < n; ++a) v += dd(i, a) * X(c, a);
      if (v != 0) t[{var(i), var(c)}] += v;
    }
  f.P = compress(t);
  return f;
}

Report check_generic_fock(const GenericFock& f, int n_max) {
  Report r;
  r.title = "generic fock";
  std::vector<Var> vs;
  for (int j = 0; j < int(f.labels.size()); ++j) vs.push_back(field_var(j, 0, f.degrees[j] & 1));
  int tested = 0;
  bool ok = true;
  std::string witness, defect;
  for (auto& u : monomials_up_to(vs, n_max)) {
    Functional F;
    F.at(0).add(u, 1);
    Functional d = f(f(F));
    ++tested;
    if (!d.is_zero() && ok) {
      ok = false;
      for (Var v : u) witness += f.label(v) + " ";
      std::ostringstream o;
      for (auto& [g, p] : d.by_genus)
        for (auto& [w, c] : p.terms) {
          o << "g=" << g << " " << to_string(c);
          break;
        }
      defect = o.str();
    }
  }
  r.add("dhat^2=0", ok, witness, defect);
  r.note("P nonzero", f.P.is_zero() ? "no" : "yes");
  r.note("inputs", std::to_string(tested));
  return r;
}

SymplecticData sample_symplectic(const Q& beta) {
  SymplecticData s;
  s.labels = {"x", "y", "x'", "y'"};
  s.degrees = {0, 1, 0, -1};
  s.omega = Matrix(4, 4);
  s.omega(0, 2) = 1;
  s.omega(2, 0) = -1;
  s.omega(1, 3) = 1;
  s.omega(3, 1) = 1;
  s.d = Matrix(4, 4);
  s.d(1, 0) = 1;      // x -> y
  s.d(1, 2) = beta;   // x' -> beta y
  s.d(2, 3) = -1;     // y' -> -x' + beta x
  s.d(0, 3) = beta;
  s.L = Matrix(4, 2);
  s.L(0, 0) = 1;
  s.L(1, 1) = 1;
  s.Lprime = Matrix(4, 2);
  s.Lprime(2, 0) = 1;
  s.Lprime(3, 1) = 1;
  return s;
}

}  // namespace bcov
