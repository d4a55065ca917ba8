#include "bcov/quantization.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "bcov/classical.hpp"
#include "json.hpp"

namespace bcov {

ScaledTheory::ScaledTheory(const DGBVModel& m, const Q& q0, Functional base)
    : m_(&m), q0_(q0), base_(std::move(base)), kf_(m) {
  require_stable(base_);
}

Functional ScaledTheory::at(const Q& q) const {
  if (q < 0 || q > 1) throw std::invalid_argument("scale q must lie in [0,1]");
  std::promise<Functional> p;
  std::shared_future<Functional> f;
  bool compute = false;
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = cache_.find(q);
    if (it == cache_.end()) {
      f = p.get_future().share();
      cache_.emplace(q, f);
      compute = true;
    } else {
      f = it->second;
    }
  }
  if (compute) {
    try {
      if (q == q0_)
        p.set_value(base_);
      else if (q < q0_)
        p.set_value(rg_flow(base_, kf_.propagator(q0_, q)));
      else
        p.set_value(rg_flow(base_, kf_.propagator(q, q0_).scaled(-1)));
    } catch (...) {
      p.set_exception(std::current_exception());
    }
  }
  return f.get();
}

int ScaledTheory::materialized() const {
  std::lock_guard<std::mutex> lk(mu_);
  return int(cache_.size());
}

Functional exact_part(const Functional& F, const DGBVModel& m, int arity_shift, int top_drop) {
  const Bounds& b = F.bounds;
  if (!m.del.is_zero()) top_drop = std::max(top_drop, 1);
  Functional r;
  r.bounds = b;
  for (auto& [g, p] : F.by_genus) {
    if (g > b.G) continue;
    Poly& out = r.at(g);
    for (auto& [u, c] : p.terms) {
      if (arity(u) > arity_bound(b, g) - arity_shift) continue;
      bool ok = true;
      for (Var v : u)
        if (v != DELTA && var_t(v) > b.T - top_drop) ok = false;
      if (ok) out.terms.emplace_hint(out.terms.end(), u, c);
    }
  }
  r.prune();
  return r;
}

namespace {

// lowest (g, n) component, as "g=.. n=.."
std::string lowest_component(const Functional& F, const FieldSpace& fs) {
  for (auto& [g, p] : F.by_genus) {
    int best = -1;
    const Mono* bu = nullptr;
    const Q* bc = nullptr;
    for (auto& [u, c] : p.terms)
      if (best < 0 || arity(u) < best) {
        best = arity(u);
        bu = &u;
        bc = &c;
      }
    if (bu) return "(g,n)=(" + std::to_string(g) + "," + std::to_string(best) + ") " + mono_label(fs, *bu) + " " + to_string(*bc);
  }
  return "";
}

Functional mul_trunc(const Functional& A, const Functional& B, int n_max) {
  Functional r;
  r.bounds = A.bounds;
  for (auto& [g1, p1] : A.by_genus)
    for (auto& [g2, p2] : B.by_genus) {
      Poly& out = r.at(g1 + g2);
      for (auto& [u, c] : p1.terms)
        for (auto& [v, d] : p2.terms) {
          if (arity(u) + arity(v) > n_max) continue;
          Mono w;
          int s = mono_mul(u, v, w);
          if (s) out.add(w, s > 0 ? Q(c * d) : Q(-(c * d)));
        }
    }
  r.prune();
  return r;
}

Functional exp_trunc(const Functional& S, int n_max) {
  Functional one;
  one.bounds = S.bounds;
  one.at(0) = Poly::constant(1);
  Functional r = one, term = one;
  for (int j = 1; j <= n_max; ++j) {
    term = mul_trunc(term, S, n_max).scaled(Q(1, j));
    if (term.is_zero()) break;
    r += term;
  }
  r.prune();
  return r;
}

Functional truncate_all(const Functional& F, int n_max) {
  Functional r = F;
  for (auto& [g, p] : r.by_genus) p = truncate_arity(p, n_max);
  r.prune();
  return r;
}

}  // namespace

Report check_qme(const Functional& F, const DGBVModel& m, const Q& q) {
  Report r;
  r.title = "quantum master equation";
  const Bounds& b = F.bounds;
  FieldSpace fs(m, b.T);
  KernelFactory kf(m);
  auto Qh = fock_differential(kf, fs, q);
  Functional d = exact_part(qme_defect(Qh, F), m);
  r.add("QF+hDF+1/2{F,F}=0", d.is_zero(), lowest_component(d, fs));
  // second route: hbar e^{-F/h} Qhat e^{F/h}, lowest two hbar orders, arity <= 4
  const int A = std::min(4, b.N);
  Functional S;
  S.bounds = b;
  for (auto& [g, p] : F.by_genus)
    for (auto& [u, c] : p.terms)
      if (arity(u) > 0 && arity(u) <= A + 2) S.at(g - 1).add(u, c);
  S.prune();
  Functional E = exp_trunc(S, A + 2);
  Functional R = mul_trunc(exp_trunc(S.scaled(-1), A), truncate_all(Qh(E), A), A).shifted(1);
  Functional lhs, rhs;
  lhs.bounds = rhs.bounds = b;
  for (int g = 0; g <= std::min(1, b.G); ++g) {
    lhs.at(g) = truncate_arity(R.get(g), A);
    rhs.at(g) = truncate_arity(qme_defect(Qh, F).get(g), A);
  }
  Functional diff = exact_part(lhs - rhs, m);
  r.add("h e^{-F/h} Qhat e^{F/h} = defect (g<=1, n<=" + std::to_string(A) + ")", diff.is_zero(), lowest_component(diff, fs));
  return r;
}

Report check_axioms(const Functional& F, const DGBVModel& m, bool at_q1) {
  Report r;
  r.title = "axioms";
  const int d = m.dim_x;
  FieldSpace fs(m, F.bounds.T);
  std::string deg_w, wt_w;
  for (auto& [g, p] : F.by_genus)
    for (auto& [u, c] : p.terms) {
      Mono v;
      for (Var x : u)
        if (x != DELTA) v.push_back(x);
      if (deg_w.empty() && functional_degree(fs, v) != (d - 3) * (2 * g - 2))
        deg_w = "g=" + std::to_string(g) + " " + mono_label(fs, v) + " degree " + std::to_string(functional_degree(fs, v));
      if (wt_w.empty() && functional_weight(fs, v) != Q((d - 3) * (g - 1)))
        wt_w = "g=" + std::to_string(g) + " " + mono_label(fs, v) + " weight " + to_string(functional_weight(fs, v));
    }
  r.add("degree (d-3)(2g-2)", deg_w.empty(), deg_w);
  r.add("weight (d-3)(g-1)", wt_w.empty(), wt_w);
  r.note("genus-0 degree", std::to_string((d - 3) * (-2)) + " = 6-2d = " + std::to_string(6 - 2 * d));
  if (at_q1) {
    int n0 = arity_bound(F.bounds, 0);
    if (n0 >= 3) {
      Poly cl = build_classical_bcov(m, n0, F.bounds.T).get(0);
      Poly diff = truncate_arity(F.get(0), n0) - cl;
      Functional dd;
      dd.at(0) = diff;
      dd.prune();
      r.add("F_0[1] = classical", dd.is_zero(), first_term(dd, fs));
    }
  }
  return r;
}

ObstructionResult solve_obstruction(const Functional& F, const DGBVModel& m, int g, const Bounds& b, const Q& q,
                                    const ObstructionOptions& opt) {
  if (g < 1) throw std::invalid_argument("target genus must be >= 1");
  const int d = m.dim_x;
  const int deg_t = (d - 3) * (2 * g - 2);
  const Q wt_t = (d - 3) * (g - 1);
  FieldSpace fs(m, b.T);
  KernelFactory kf(m);
  auto Qh = fock_differential(kf, fs, q);
  const bool q_zero = Qh.Q.is_zero() && Qh.D.is_zero();
  if (!m.del.is_zero()) {
    // largest t-power an allowed monomial can carry
    Q min_wt = m.weight(0);
    for (int a = 0; a < m.dim(); ++a) min_wt = std::min(min_wt, m.weight(a));
    Q max_k = -wt_t - Q(b.N) * min_wt;
    if (max_k >= b.T + 1) throw TruncationUnderflow("obstruction solve needs T >= " + to_string(max_k));
  }
  for (int h = 0; h < g; ++h)
    if (F.get(h).is_zero() && h == 0) throw std::invalid_argument("genus 0 part missing");
  std::vector<Mono> unk, hom;
  for (auto& u : monomials_up_to(fs.vars(), b.N)) {
    int n = int(u.size());
    if (2 * g - 2 + n <= 0) continue;
    Q w = functional_weight(fs, u);
    int dg = functional_degree(fs, u);
    if (w != wt_t) continue;
    if (dg == deg_t) unk.push_back(u);
    if (dg == deg_t - 1 && n >= 1) hom.push_back(u);
  }
  const bool use_hom = opt.dilaton && !q_zero;
  const int nF = int(unk.size()), nG = use_hom ? int(hom.size()) : 0;
  const Poly& F0 = F.get(0);
  auto delta_F = [&](const Poly& G) {
    Poly r = induced(Qh.Q, G);
    if (!Qh.D.is_zero()) r += (bracket(Qh.D, F0, G) + bracket(Qh.D, G, F0)).scaled(Q(1, 2));
    return r;
  };
  std::map<Mono, int> rowA, rowB;
  std::vector<SparseRow> rows;
  std::vector<Q> rhs;
  std::vector<Mono> row_mono;
  auto row_of = [&](std::map<Mono, int>& idx, const Mono& u) {
    auto it = idx.find(u);
    if (it != idx.end()) return it->second;
    int id = int(rows.size());
    idx[u] = id;
    rows.emplace_back();
    rhs.push_back(0);
    row_mono.push_back(u);
    return id;
  };
  for (int j = 0; j < nF; ++j)
    for (auto& [u, c] : delta_F(Poly::monomial(unk[j])).terms)
      if (arity(u) <= b.N) rows[row_of(rowA, u)][j] += c;
  // O = Delta F_{g-1} + 1/2 sum_{0<h<g} {F_h, F_{g-h}}
  Poly O;
  if (!Qh.D.is_zero()) O += contract(Qh.D, F.get(g - 1));
  for (int h = 1; h < g; ++h) O += bracket(Qh.D, F.get(h), F.get(g - h)).scaled(Q(1, 2));
  for (auto& [u, c] : O.terms)
    if (arity(u) <= b.N) rhs[row_of(rowA, u)] -= c;
  const int nA = int(rows.size());
  if (opt.dilaton) {
    int top = opt.dilaton_top ? b.N : b.N - 1;
    FieldSpace fs1(m, std::max(b.T, 1));
    FieldMap L0;
    for (int a = 0; a < m.dim(); ++a)
      for (int k = 0; k <= b.T; ++k) {
        Q c = hfactor(m, a, k);
        if (c != 0) L0.add(fs.var(a, k), fs.var(a, k), c);
      }
    FieldVec dil = dilaton_vector(fs1, 0);
    for (int j = 0; j < nF; ++j) {
      Poly img = induced(L0, Poly::monomial(unk[j])) - directional(dil, Poly::monomial(unk[j]));
      for (auto& [u, c] : img.terms)
        if (arity(u) <= top) rows[row_of(rowB, u)][j] += c;
    }
    for (int j = 0; j < nG; ++j) {
      Poly G = Poly::monomial(hom[j]);
      Poly img = induced(Qh.Q, G);
      if (!Qh.D.is_zero()) img += bracket(Qh.D, F0, G);
      for (auto& [u, c] : img.terms)
        if (arity(u) <= top) rows[row_of(rowB, u)][nF + j] -= c;
    }
  }
  ObstructionResult res;
  res.unknowns = nF;
  res.homotopy_unknowns = nG;
  res.equations = int(rows.size());
  auto sol = solve_sparse(rows, rhs, nF + nG);
  res.rank = sol.rank;
  res.solvable = sol.consistent;
  res.particular.bounds = res.particular.bounds = Bounds{g, b.N, b.T};
  if (!sol.consistent) {
    int i = *sol.bad_row;
    res.witness = std::string(i < nA ? "qme" : "dilaton") + " row " + mono_label(fs, row_mono[i]) + " rhs " +
                  to_string(rhs[i]);
    return res;
  }
  for (auto& [j, v] : sol.particular)
    if (j < nF) res.particular.at(g).add(unk[j], v);
  res.particular.prune();
  std::vector<SparseRow> kproj;
  for (auto& kv : sol.kernel) {
    SparseRow row;
    for (auto& [j, v] : kv)
      if (j < nF) row[j] = v;
    if (!row.empty()) kproj.push_back(row);
  }
  res.solution_dim = sparse_rank(kproj);
  // homotopies: delta_F H for H one degree lower
  std::map<Mono, int> uidx;
  for (int j = 0; j < nF; ++j) uidx[unk[j]] = j;
  std::vector<SparseRow> img;
  for (auto& h : hom) {
    SparseRow row;
    for (auto& [u, c] : delta_F(Poly::monomial(h)).terms) {
      auto it = uidx.find(u);
      if (it != uidx.end()) row[it->first.size() ? it->second : 0] += c;
    }
    for (auto it = row.begin(); it != row.end();) it = it->second == 0 ? row.erase(it) : std::next(it);
    if (!row.empty()) img.push_back(row);
  }
  res.homotopy_dim = sparse_rank(img);
  std::vector<SparseRow> both = kproj;
  both.insert(both.end(), img.begin(), img.end());
  res.dim_mod_homotopy = sparse_rank(both) - res.homotopy_dim;
  // a kernel basis in F coordinates (reduced)
  for (auto& row : kproj) {
    Functional k;
    k.bounds = res.particular.bounds;
    for (auto& [j, v] : row) k.at(g).add(unk[j], v);
    k.prune();
    res.kernel.push_back(std::move(k));
  }
  return res;
}

Functional build_quantized(const DGBVModel& m, const Bounds& b, std::vector<ObstructionResult>* log) {
  const int n0 = arity_bound(b, 0);
  Functional F = n0 >= 3 ? build_classical_bcov(m, n0, b.T) : Functional{};
  F.bounds = b;
  for (int g = 1; g <= b.G; ++g) {
    auto r = solve_obstruction(F, m, g, Bounds{g, arity_bound(b, g), b.T}, 1);
    if (log) log->push_back(r);
    if (!r.solvable) break;
    for (auto& [h, p] : r.particular.by_genus) F.at(h) += p;
  }
  F.prune();
  F.bounds = b;
  return F;
}

std::string HarmonicSpace::label(Var v) const { return labels.at(var_alg(v)) + "@" + std::to_string(var_t(v)); }

std::string HarmonicSpace::mono_label(const Mono& u) const {
  std::string s;
  for (Var v : u) {
    if (!s.empty()) s += " ";
    s += v == DELTA ? std::string("delta") : label(v);
  }
  return s;
}

HarmonicSpace harmonic_space(const DGBVModel& m, int T) {
  HarmonicSpace h;
  h.T = T;
  HodgeData hd = hodge_data(m);
  h.H = column_basis(hd.projector(0));
  const int r = h.H.cols();
  for (int j = 0; j < r; ++j) {
    int nz = 0, first = -1;
    for (int i = 0; i < m.dim(); ++i)
      if (h.H(i, j) != 0) {
        ++nz;
        if (first < 0) first = i;
      }
    bool unit = nz == 1 && h.H(first, j) == 1;
    h.alg.push_back(unit ? first : -1);
    h.labels.push_back(unit ? m.basis.labels[first] : "h" + std::to_string(j));
    h.parity.push_back(m.parity(first));
  }
  h.pairing = Matrix(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      GradedVector a, b;
      for (int x = 0; x < m.dim(); ++x) {
        if (h.H(x, i) != 0) a.add(x, h.H(x, i));
        if (h.H(x, j) != 0) b.add(x, h.H(x, j));
      }
      h.pairing(i, j) = m.tr(m.mul(a, b));
    }
  return h;
}

Functional restrict_to(const Functional& F, const HarmonicSpace& h) {
  std::map<Var, Poly> lin;
  auto form = [&](Var x) -> const Poly& {
    auto it = lin.find(x);
    if (it != lin.end()) return it->second;
    Poly p;
    if (x == DELTA)
      p.add(Mono{DELTA}, 1);
    else
      for (int j = 0; j < h.H.cols(); ++j)
        if (h.H(var_alg(x), j) != 0) p.add(Mono{h.var(j, var_t(x))}, h.H(var_alg(x), j));
    return lin[x] = p;
  };
  Functional r;
  r.bounds = F.bounds;
  for (auto& [g, p] : F.by_genus) {
    Poly& out = r.at(g);
    for (auto& [u, c] : p.terms) {
      Poly t = Poly::constant(c);
      for (Var x : u) {
        t = t * form(x);
        if (t.is_zero()) break;
      }
      out += t;
    }
  }
  r.prune();
  return r;
}

Polarization parse_polarization(const std::string& text, const HarmonicSpace& h) {
  auto j = nlohmann::json::parse(text);
  if (!j.contains("phi") || !j["phi"].is_array()) throw std::invalid_argument("polarization: missing phi");
  auto idx = [&](const std::string& s) {
    for (int i = 0; i < int(h.labels.size()); ++i)
      if (h.labels[i] == s) return i;
    throw std::invalid_argument("polarization: unknown harmonic class " + s);
  };
  Polarization p;
  for (auto& e : j["phi"]) {
    if (!e.is_array() || e.size() != 5) throw std::invalid_argument("polarization: entries are [src,k,tgt,l,coeff]");
    Polarization::Entry x;
    x.src = idx(e[0].get<std::string>());
    x.src_k = e[1].get<int>();
    x.tgt = idx(e[2].get<std::string>());
    x.tgt_k = e[3].get<int>();
    x.c = e[4].is_string() ? parse_rational(e[4].get<std::string>()) : Q(e[4].get<long>());
    if (x.src_k >= 0 || x.tgt_k < 0) throw std::invalid_argument("polarization: phi maps t^k, k<0, to t^l, l>=0");
    p.phi.push_back(x);
  }
  return p;
}

namespace {

using Key = std::pair<int, int>;  // (class, k)
using Vec = std::map<Key, Q>;

Vec phi_of(const Polarization& p, const Key& key) {
  Vec v;
  for (auto& e : p.phi)
    if (e.src == key.first && e.src_k == key.second) v[{e.tgt, e.tgt_k}] += e.c;
  return v;
}

Q omega(const HarmonicSpace& h, const Vec& x, const Vec& y) {
  Q s = 0;
  for (auto& [a, c] : x)
    for (auto& [b, d] : y)
      if (a.second + b.second == -1) s += ((b.second & 1) ? Q(-1) : Q(1)) * c * d * h.pairing(a.first, b.first);
  return s;
}

}  // namespace

void validate_polarization(const Polarization& p, const HarmonicSpace& h) {
  const int r = int(h.labels.size());
  int kmin = -1;
  for (auto& e : p.phi) kmin = std::min(kmin, e.src_k);
  std::set<Key> keys;
  for (auto& e : p.phi) {
    keys.insert({e.src, e.src_k});
    for (int a = 0; a < r; ++a) keys.insert({a, -e.tgt_k - 1});
  }
  for (auto& k1 : keys)
    for (auto& k2 : keys) {
      Vec u1 = phi_of(p, k1), u2 = phi_of(p, k2);
      u1[k1] += 1;
      u2[k2] += 1;
      if (omega(h, u1, u2) != 0)
        throw std::invalid_argument("polarization not Lagrangian at " + h.labels[k1.first] + " t^" +
                                    std::to_string(k1.second) + ", " + h.labels[k2.first] + " t^" + std::to_string(k2.second));
    }
  for (int a = 0; a < r; ++a)
    for (int k = kmin; k <= -1; ++k) {
      Vec neg, pos;
      neg[{a, k - 1}] += 1;
      for (auto& [b, c] : phi_of(p, {a, k})) {
        if (b.second == 0)
          neg[{b.first, -1}] += c;
        else
          pos[{b.first, b.second - 1}] += c;
      }
      Vec want;
      for (auto& [b, c] : neg)
        for (auto& [t, d] : phi_of(p, b)) want[t] += c * d;
      for (auto it = want.begin(); it != want.end();) it = it->second == 0 ? want.erase(it) : std::next(it);
      for (auto it = pos.begin(); it != pos.end();) it = it->second == 0 ? pos.erase(it) : std::next(it);
      if (want != pos)
        throw std::invalid_argument("polarization complement not preserved by t^-1 at " + h.labels[a] + " t^" +
                                    std::to_string(k));
    }
}

Kernel2 polarization_kernel(const Polarization& p, const HarmonicSpace& h) {
  auto X = inverse(h.pairing);
  if (!X) throw std::domain_error("harmonic pairing degenerate");
  Tensor2 t;
  for (auto& e : p.phi) {
    int l2 = -e.src_k - 1;
    if (e.tgt_k > h.T || l2 > h.T) throw TruncationUnderflow("polarization reaches past t^T");
    for (int b = 0; b < int(h.labels.size()); ++b) {
      if ((*X)(e.src, b) == 0) continue;
      Q v = e.c * (*X)(e.src, b);
      if (e.src_k & 1) v = -v;
      t[{h.var(e.tgt, e.tgt_k), h.var(b, l2)}] += v;
    }
  }
  for (auto it = t.begin(); it != t.end();) it = it->second == 0 ? t.erase(it) : std::next(it);
  return compress(t);
}

std::vector<CorrelatorEntry> correlators(const ScaledTheory& th, const Polarization* pol, int g_max, int n_max) {
  const DGBVModel& m = th.model();
  Report qme = check_qme(th.at(th.base_scale()), m, th.base_scale());
  if (!qme.all_pass()) throw std::runtime_error("QME fails at the base scale; correlators undefined");
  Functional F = exact_part(th.at(0), m);
  HarmonicSpace h = harmonic_space(m, th.bounds().T);
  Functional R = restrict_to(F, h);
  if (pol) {
    validate_polarization(*pol, h);
    R = rg_flow(R, polarization_kernel(*pol, h));
  }
  std::vector<CorrelatorEntry> out;
  for (auto& [g, p] : R.by_genus) {
    if (g > g_max) continue;
    for (auto& [u, c] : p.terms) {
      if (int(u.size()) > n_max || u.empty()) continue;
      std::vector<FieldVec> args;
      CorrelatorEntry e{g, {}, 0};
      for (Var v : u) {
        args.push_back(FieldVec{{v, Q(1)}});
        e.inputs.push_back(h.label(v));
      }
      e.value = evaluate(Poly::monomial(u, c), args);
      if (e.value != 0) out.push_back(std::move(e));
    }
  }
  return out;
}

Functional virasoro_defect(const Functional& F, const Functional& G, const DGBVModel& m, int n, const Q& q) {
  const int T = F.bounds.T;
  VirasoroOps ops(m, T, q);
  Functional d = ops.apply_exp(n, F);
  d -= ops.Qhat()(G);
  Kernel2 D = ops.kf.delta_kernel(q);
  if (!D.is_zero()) d -= kernel_bracket(F, G, D);
  d.prune();
  d.bounds = F.bounds;
  return exact_part(d, m, 1, std::max(n, 0));
}

namespace {

Functional with_delta(const Functional& F, const Functional& G) {
  Functional r = F;
  for (auto& [g, p] : G.by_genus) r.at(g) += times_delta(p);
  r.prune();
  return r;
}

void split(const Functional& X, Functional& F, Functional& G) {
  F = Functional{};
  G = Functional{};
  F.bounds = G.bounds = X.bounds;
  for (auto& [g, p] : X.by_genus) {
    Poly a, b;
    split_delta(p, a, b);
    F.at(g) = a;
    G.at(g) = b;
  }
  F.prune();
  G.prune();
}

}  // namespace

Report check_virasoro_quantization(const Functional& F, const Functional& G, const DGBVModel& m, int n, const Q& q1,
                                   const Q& q2) {
  Report r;
  r.title = "virasoro quantization n=" + std::to_string(n);
  FieldSpace fs(m, F.bounds.T + 2);
  Functional d1 = virasoro_defect(F, G, m, n, q1);
  r.add("four-term @q1=" + to_string(q1), d1.is_zero(), lowest_component(d1, fs));
  KernelFactory kf(m);
  Kernel2 P = kf.propagator(q1, q2);
  Kernel2 Pd = kf.twisted_propagator_delta(n, q1, q2, F.bounds.T);
  r.note("twisted propagator delta part", Pd.is_zero() ? "0" : std::to_string(Pd.upper.size()) + " entries");
  Functional X = rg_flow(with_delta(F, G), P, Pd);
  Functional F2, G2;
  split(X, F2, G2);
  Functional plain = rg_flow(F, P);
  Functional diff = F2 - plain;
  diff.prune();
  r.add("twisted flow, delta^0 part = flow", diff.is_zero(), lowest_component(diff, fs));
  Functional d2 = virasoro_defect(F2, G2, m, n, q2);
  r.add("four-term @q2=" + to_string(q2), d2.is_zero(), lowest_component(d2, fs));
  return r;
}

Report quantum_virasoro_limit_check(const Functional& F0, const DGBVModel& m, int n) {
  Report r;
  r.title = "quantum virasoro limit n=" + std::to_string(n);
  VirasoroOps ops(m, F0.bounds.T, 0);
  Functional d = ops.apply_exp(n, F0);
  d.bounds = F0.bounds;
  d = exact_part(d, m, 1, std::max(n, 0));
  HarmonicSpace h = harmonic_space(m, F0.bounds.T);
  Functional R = restrict_to(d, h);
  std::string w;
  for (auto& [g, p] : R.by_genus)
    if (!p.is_zero() && w.empty())
      w = "g=" + std::to_string(g) + " " + h.mono_label(p.terms.begin()->first) + " " + to_string(p.terms.begin()->second);
  r.add("L_n[0]F+1/2{F,F}_{V_n(0)}=0 on harmonics", R.is_zero(), w);
  return r;
}

}  // namespace bcov
