// One line per acceptance criterion. All tolerances are exact (rational
// arithmetic, zero tolerance) except the runtime caps on C01 and C02.
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include "bcov/classical.hpp"
#include "bcov/flow.hpp"
#include "bcov/fock.hpp"
#include "bcov/quantization.hpp"
#include "bcov/virasoro.hpp"

using namespace bcov;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

int failures = 0;

void criterion(const char* id, const char* what, const char* tol, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.ok) ++failures;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", dt);
  std::cout << (o.ok ? "PASS " : "FAIL ") << id << "  " << what << "  [tol " << tol << "; " << buf << "]  "
            << o.detail << std::endl;
}

std::string failed_ids(const Report& r) {
  std::string s;
  for (auto& c : r.checks)
    if (c.status == Status::Fail) s += (s.empty() ? "" : "; ") + c.id + (c.witness.empty() ? "" : " @ " + c.witness);
  return s;
}

std::string info(const Report& r, const std::string& key) {
  for (auto& [k, v] : r.info)
    if (k == key) return v;
  return "?";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// exterior algebra oracle for the elliptic model (basis 1, theta, eta, theta_eta)
Q elliptic_oracle(const std::vector<std::pair<int, int>>& ins) {
  int n = int(ins.size()), ks = 0, mask = 0, sign = 1;
  for (auto& [a, k] : ins) {
    ks += k;
    if (mask & a) return 0;
    if ((a & 1) && (mask & 2)) sign = -sign;  // theta passes an eta on its left
    mask |= a;
  }
  if (ks != n - 3 || mask != 3) return 0;
  mpz_class num = 1, den = 1;
  for (int i = 2; i <= n - 3; ++i) num *= i;
  for (auto& [a, k] : ins)
    for (int i = 2; i <= k; ++i) den *= i;
  Q r(num * sign, den);
  r.canonicalize();
  return r;
}

void all_tuples(int n, int T, std::vector<std::pair<int, int>>& cur, std::vector<std::vector<std::pair<int, int>>>& out) {
  if (int(cur.size()) == n) {
    out.push_back(cur);
    return;
  }
  for (int a = 0; a < 4; ++a)
    for (int k = 0; k <= T; ++k) {
      cur.push_back({a, k});
      all_tuples(n, T, cur, out);
      cur.pop_back();
    }
}

Functional with_genus_one_vertex(const DGBVModel& m, int G, int N, int T) {
  Functional F = build_classical_bcov(m, N + 2 * G, T);
  F.bounds = {G, N, T};
  FieldSpace fs(m, T);
  Var x = fs.var(0, 0), y = fs.var(0, 1);
  F.at(1).add({x, y}, Q(-1, 24));
  return F;
}

std::string run_cmd(const std::string& cmd, int& status) {
  std::array<char, 4096> buf;
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    status = -1;
    return out;
  }
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  status = pclose(p);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = argc > 1 ? argv[1] : "./bcov";
  const DGBVModel e = builtin_elliptic_cohomology();
  const DGBVModel f = builtin_fourier_torus(1);
  const DGBVModel f2 = builtin_fourier_torus(1, 2);
  const DGBVModel s = resolve_model(std::string(BCOV_MODEL_DIR) + "/surface-d2.json");

  criterion("C01", "classical D_nF table on elliptic, n<=6", "exact, runtime<1s", [&] {
    auto t0 = std::chrono::steady_clock::now();
    Functional F = build_classical_bcov(e, 6, 3);
    auto table = classical_table(e, 6);
    double dt = seconds_since(t0);  // the oracle sweep below is not part of the cap
    FieldSpace fs(e, 3);
    long tested = 0, bad = 0, nonzero = 0;
    for (int n = 3; n <= 6; ++n) {
      std::vector<std::vector<std::pair<int, int>>> all;
      std::vector<std::pair<int, int>> cur;
      all_tuples(n, n - 3, cur, all);
      for (auto& t : all) {
        int ks = 0;
        for (auto& [a, k] : t) ks += k;
        if (ks != n - 3) continue;
        std::vector<FieldVec> args;
        for (auto& [a, k] : t) args.push_back({{fs.var(a, k), 1}});
        Q want = elliptic_oracle(t);
        bad += evaluate(F.get(0), args) != want;
        nonzero += want != 0;
        ++tested;
      }
    }
    auto val = [&](std::vector<std::pair<int, int>> t) {
      std::vector<FieldVec> args;
      for (auto& [a, k] : t) args.push_back({{fs.var(a, k), 1}});
      return evaluate(F.get(0), args);
    };
    Q d4 = val({{0, 1}, {0, 0}, {0, 0}, {3, 0}});
    Q d5 = val({{0, 1}, {0, 1}, {0, 0}, {1, 0}, {2, 0}});
    for (auto& r : table) bad += r.value != r.multinomial * r.trace;
    std::ostringstream os;
    os << "build " << std::fixed << std::setprecision(3) << dt << "s, " << table.size() << " table rows; " << tested << " ordered tuples (" << nonzero << " nonzero), " << bad << " mismatches; D4(k=1,0,0,0)=" << d4
       << " D5(k=1,1,0,0,0)=" << d5;
    return Outcome{bad == 0 && d4 == 1 && d5 == 2 && dt < 1.0, os.str()};
  });

  criterion("C02", "classical master equation on fourier-torus(1), arity<=6, T<=3", "exact, runtime<60s", [&] {
    auto t0 = std::chrono::steady_clock::now();
    std::string d;
    bool ok = true;
    for (int T = 0; T <= 3; ++T) {
      Functional F = build_classical_bcov(f, 6, T);
      Report r = check_classical_master_equation(F, f);
      ok = ok && r.all_pass();
      d += "T=" + std::to_string(T) + ":arity<=" + info(r, "max arity checked") + " ";
      if (!r.all_pass()) d += failed_ids(r) + " ";
    }
    return Outcome{ok && seconds_since(t0) < 60, d};
  });

  criterion("C03", "string and dilaton equations, n<=6, both builtins", "exact", [&] {
    bool ok = true;
    std::string d;
    for (auto* m : {&e, &f}) {
      Functional F = build_classical_bcov(*m, 7, 4);
      Report a = check_string_equation(F, *m), b = check_dilaton_equation(F, *m);
      ok = ok && a.all_pass() && b.all_pass();
      d += m->name + ": string " + std::to_string(a.checks.size()) + " checks, dilaton " +
           std::to_string(b.checks.size()) + " checks (factor n-2, n=3..6); ";
      d += failed_ids(a) + failed_ids(b);
    }
    return Outcome{ok, d};
  });

  criterion("C04", "Qhat_q^2 = 0 on fourier-torus(1) (2,4,3), generic Fock d^2 = 0", "exact", [&] {
    Report r = check_fock_nilpotence(f, {2, 4, 3}, {1, Q(1, 2), 0});
    GenericFock g = generic_fock_differential(sample_symplectic(1));
    Report gr = check_generic_fock(g, 4);
    bool nontrivial = !g.P.is_zero() && !g.dL.is_zero();
    return Outcome{r.all_pass() && gr.all_pass() && nontrivial,
                   "q in {1,1/2,0}: " + std::to_string(r.checks.size()) + " checks; generic 4-dim (beta=1, P!=0): " +
                       std::to_string(gr.checks.size()) + " checks " + failed_ids(r) + failed_ids(gr)};
  });

  criterion("C05", "rg_flow = graph sum, g<=2, n<=4, fourier-torus(1); (1,1) loop factor 1/2", "exact", [&] {
    Functional F = with_genus_one_vertex(f, 2, 4, 1);
    Kernel2 P = KernelFactory(f).propagator(1, Q(1, 2));
    OracleStats st;
    Functional A = rg_flow(F, P).truncated(2, 4);
    Functional B = rg_flow_graph_oracle(F, P, 2, 4, &st);
    Functional diff = A - B;
    diff.prune();
    int comps = 0;
    for (int g = 0; g <= 2; ++g)
      for (int n = 0; n <= 4; ++n) comps += !A.component(g, n).is_zero();
    // self loop on a classical 3-point vertex: F_11(c) = 1/2 sum P^ij D3F(i,j,c)
    FieldSpace fs(f, 1);
    Functional C = build_classical_bcov(f, 3, 1);
    C.bounds = {1, 1, 1};
    Functional L = rg_flow(C, P);
    Tensor2 full = P.full();
    bool loop_ok = true;
    int loop_nonzero = 0;
    for (Var c : fs.vars()) {
      if (var_parity(c)) continue;
      Q sum = 0;
      for (auto& [ij, p] : full) sum += p * evaluate(C.get(0), {{{ij.first, 1}}, {{ij.second, 1}}, {{c, 1}}});
      Q got = evaluate(L.get(1), {{{c, 1}}});
      loop_ok = loop_ok && got == sum / 2;
      loop_nonzero += got != 0;
    }
    std::ostringstream os;
    os << comps << " nonzero (g,n) components, " << st.graphs << " graph classes, max " << st.max_vertices
       << " vertices, mismatched terms " << diff.size() << "; self-loop 1/2 on " << loop_nonzero << " nonzero inputs";
    return Outcome{diff.is_zero() && loop_ok && loop_nonzero > 0, os.str()};
  });

  criterion("C06", "flow 1->1/2->1/4 equals 1->1/4", "exact", [&] {
    Functional F = with_genus_one_vertex(f, 2, 4, 2);
    KernelFactory kf(f);
    Functional a = rg_flow(rg_flow(F, kf.propagator(1, Q(1, 2))), kf.propagator(Q(1, 2), Q(1, 4)));
    Functional b = rg_flow(F, kf.propagator(1, Q(1, 4)));
    return Outcome{a == b, std::to_string(b.size()) + " coefficients compared, bounds (2,4,2)"};
  });

  criterion("C07", "[Q,d_P] = D_q1 - D_q2 and QME preserved by flow, fourier-torus(1)", "exact", [&] {
    Report c = check_conjugation_lemma(f, 1, Q(1, 2), {2, 4, 3});
    Report c2 = check_conjugation_lemma(f, Q(1, 2), 0, {2, 4, 3});
    Functional base = build_quantized(f, {1, 3, 3});
    ScaledTheory th(f, 1, base);
    bool qme = true;
    std::string d;
    for (Q q : {Q(1), Q(1, 2), Q(1, 4), Q(0)}) {
      Report r = check_qme(th.at(q), f, q);
      qme = qme && r.all_pass();
      d += failed_ids(r);
    }
    ScaledTheory th0(f, 1, [&] {
      Functional F = build_classical_bcov(f, 6, 3);
      F.bounds = {0, 6, 3};
      return F;
    }());
    for (Q q : {Q(1, 2), Q(0)}) {
      Report r = check_qme(th0.at(q), f, q);
      qme = qme && r.all_pass();
      d += failed_ids(r);
    }
    return Outcome{c.all_pass() && c2.all_pass() && qme,
                   "lemma at (1,1/2) and (1/2,0): " + std::to_string(c.checks.size() + c2.checks.size()) +
                       " checks; QME at q in {1,1/2,1/4,0} for (1,3,3) and (0,6,3) theories " + failed_ids(c) + d};
  });

  criterion("C08", "Qhat_q cohomology dims agree over q and two metrics", "exact", [&] {
    std::vector<CohomologyDims> dims;
    Report r = check_fock_cohomology_invariance({f, f2}, {1, Q(1, 2), 0}, {1, 4, 1}, &dims);
    std::string d;
    for (auto& x : dims) d += x.model + "@" + to_string(x.q) + "=" + std::to_string(x.dim) + "/" + std::to_string(x.total) + " ";
    return Outcome{r.all_pass() && dims.size() == 6, d};
  });

  criterion("C09", "[L_n,L_m] = (m-n)L_{n+m}, -1<=n,m<=4, T=10", "exact", [&] {
    Report r = check_virasoro_relations(e, 4, 10);
    Report r2 = check_virasoro_relations(f, 4, 10);
    return Outcome{r.all_pass() && r2.all_pass() && r.checks.size() == 36,
                   std::to_string(r.checks.size()) + " pairs each on elliptic and fourier, window " + info(r, "window") +
                       " " + failed_ids(r) + failed_ids(r2)};
  });

  criterion("C10", "classical Virasoro n=1,2: elliptic arity<=6, fourier arity<=5", "exact", [&] {
    Functional E = build_classical_bcov(e, 7, 5), Fo = build_classical_bcov(f, 6, 4);
    bool ok = true;
    std::string d;
    for (int n : {1, 2}) {
      Report a = check_classical_virasoro(E, e, n, 6), b = check_classical_virasoro(Fo, f, n, 5);
      ok = ok && a.all_pass() && b.all_pass();
      d += failed_ids(a) + failed_ids(b);
    }
    return Outcome{ok, "4 identities " + d};
  });

  criterion("C11", "homotopic Virasoro with [Qhat,U_n], [Qhat,L_n]=0, fourier (2,4,3)", "exact", [&] {
    Report r = check_homotopic_virasoro(f, Q(1, 2), 2, {2, 4, 3});
    return Outcome{r.all_pass(), std::to_string(r.checks.size()) + " checks; sign outcome: " +
                                     info(r, "effective sign") + " " + failed_ids(r)};
  });

  criterion("C12", "genus-1 obstruction on elliptic (1,4,2) with L_0 constraint", "exact", [&] {
    Functional F = build_classical_bcov(e, 6, 2);
    F.bounds = {0, 6, 2};
    auto plain = solve_obstruction(F, e, 1, {1, 4, 2}, 1);
    ObstructionOptions o;
    o.dilaton = true;
    auto dil = solve_obstruction(F, e, 1, {1, 4, 2}, 1, o);
    o.dilaton_top = true;
    auto top = solve_obstruction(F, e, 1, {1, 4, 2}, 1, o);
    std::ostringstream os;
    os << "QME affine set: dim " << plain.solution_dim << " of " << plain.unknowns << " unknowns (Qhat=0, O=0); "
       << "with L_0 on exact rows (arity<=3): dim " << dil.solution_dim << " mod homotopy " << dil.dim_mod_homotopy;
    if (dil.dim_mod_homotopy != 0) os << " [FINDING: expected 0]";
    os << "; with L_0 rows also at arity 4 (truncated): dim " << top.solution_dim;
    return Outcome{plain.solvable && dil.solvable && top.solvable && plain.solution_dim == plain.unknowns, os.str()};
  });

  criterion("C13", "degree/weight axioms on stored theories; classical degree 6-2d", "exact", [&] {
    bool ok = true;
    std::string d;
    auto add = [&](const Report& r, const std::string& tag) {
      ok = ok && r.all_pass();
      if (!r.all_pass()) d += tag + ": " + failed_ids(r) + " ";
    };
    for (auto* m : {&e, &f, &s}) {
      Functional F = build_classical_bcov(*m, 5, 2);
      F.bounds = {0, 5, 2};
      add(check_classical_gradings(F, *m), m->name + " classical");
      ScaledTheory th(*m, 1, F);
      for (Q q : {Q(1), Q(1, 2), Q(0)}) add(check_axioms(th.at(q), *m, q == 1), m->name + "@" + to_string(q));
      int deg = 6 - 2 * m->dim_x, axiom = (m->dim_x - 3) * (2 * 0 - 2);
      ok = ok && deg == axiom;
      d += m->name + ": 6-2d=" + std::to_string(deg) + " (d-3)(2g-2)|g=0=" + std::to_string(axiom) + "; ";
    }
    ScaledTheory q1(f, 1, build_quantized(f, {1, 3, 3}));
    for (Q q : {Q(1), Q(1, 2), Q(0)}) add(check_axioms(q1.at(q), f, q == 1), "fourier g<=1 @" + to_string(q));
    return Outcome{ok, d};
  });

  criterion("C14", "repeated CLI runs are byte-identical", "byte equality", [&] {
    std::vector<std::string> cmds = {
        cli + " check all --model elliptic-cohomology --bounds 2,6,3 --format json",
        cli + " correlators --model elliptic-cohomology --bounds 1,3,3 --g-max 1 --n-max 3 --format json",
        cli + " quantize solve --model elliptic-cohomology --bounds 1,4,2 --constraints dilaton --format json",
        cli + " flow --model fourier-torus --bounds 1,3,3 --to-q 1/2"};
    std::string d;
    bool ok = true;
    for (auto& c : cmds) {
      int s1 = 0, s2 = 0;
      std::string a = run_cmd(c + " 2>&1", s1), b = run_cmd(c + " 2>&1", s2);
      bool same = a == b && s1 == s2 && s1 == 0 && !a.empty();
      ok = ok && same;
      d += std::to_string(a.size()) + "B" + (same ? " " : "(differs) ");
    }
    return Outcome{ok, std::to_string(cmds.size()) + " commands x2: " + d};
  });

  std::cout << (failures ? "acceptance: " + std::to_string(failures) + " criteria failed" : std::string("acceptance: all 14 criteria pass"))
            << std::endl;
  return failures ? 1 : 0;
}
