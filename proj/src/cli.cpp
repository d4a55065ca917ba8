#include "bcov/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "bcov/classical.hpp"
#include "bcov/flow.hpp"
#include "bcov/fock.hpp"
#include "bcov/quantization.hpp"
#include "bcov/virasoro.hpp"
#include "json.hpp"

namespace bcov {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string model = "elliptic-cohomology";
  std::string bounds = "1,4,2";
  std::string format = "text";
  std::string out;
  std::string in;
  std::string theory;
  std::string from_q = "1", to_q = "0", q = "1/2", quant_q = "1";
  std::string scales = "1,1/2,0";
  std::string polarization = "default";
  std::string constraints = "none";
  bool dilaton_top = false;
  int n = 5, n_max = 2, g_max = 1, target_g = 1;
};

Q parse_scale(const std::string& s) {
  Q q;
  try {
    q = parse_rational(s);
  } catch (std::exception&) {
    throw UsageError("bad scale '" + s + "'");
  }
  if (q < 0 || q > 1) throw UsageError("scale " + s + " outside [0,1]");
  return q;
}

std::vector<Q> parse_scales(const std::string& s) {
  std::vector<Q> r;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) r.push_back(parse_scale(tok));
  if (r.empty()) throw UsageError("no scales given");
  return r;
}

Bounds parse_bounds(const std::string& s) {
  Bounds b;
  char c1 = 0, c2 = 0;
  std::stringstream ss(s);
  if (!(ss >> b.G >> c1 >> b.N >> c2 >> b.T) || c1 != ',' || c2 != ',' || !ss.eof())
    throw UsageError("bounds must be G,N,T");
  if (b.G < 0 || b.N < 1 || b.T < 0) throw UsageError("bounds out of range");
  return b;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const Config& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw UsageError("cannot write " + c.out);
  f << text;
}

int emit_report(const Config& c, const Report& r, const DGBVModel& m, std::ostream& out) {
  emit(c, c.format == "json" ? r.to_json(kToolVersion, model_hash(m)) : r.to_text(), out);
  return r.all_pass() ? 0 : 1;
}

Functional load_theory(const Config& c, const DGBVModel& m, const Bounds& b) {
  FieldSpace fs(m, b.T);
  Functional F;
  try {
    F = functional_from_json(slurp(c.theory), fs);
  } catch (UsageError&) {
    throw;
  } catch (std::exception& e) {
    throw UsageError(c.theory + ": " + e.what());
  }
  F.bounds = b;
  return F;
}

Report classical_checks(const DGBVModel& m, const Bounds& b) {
  Functional F = build_classical_bcov(m, std::max(3, b.N), b.T);
  Report r;
  r.title = "classical " + m.name;
  r.merge(check_classical_master_equation(F, m), "cme: ");
  r.merge(check_string_equation(F, m), "string: ");
  r.merge(check_dilaton_equation(F, m), "dilaton: ");
  r.merge(check_classical_gradings(F, m), "gradings: ");
  return r;
}

Report fock_checks(const DGBVModel& m, const Bounds& b, const std::vector<Q>& scales) {
  Report r;
  r.title = "fock " + m.name;
  r.merge(check_fock_nilpotence(m, b, scales), "nilpotence: ");
  for (std::size_t i = 0; i + 1 < scales.size(); ++i) {
    Q q1 = std::max(scales[i], scales[i + 1]), q2 = std::min(scales[i], scales[i + 1]);
    r.merge(check_conjugation_lemma(m, q1, q2, b), "conjugation: ");
  }
  r.merge(check_fock_cohomology_invariance({m}, scales, b), "cohomology: ");
  return r;
}

Report virasoro_checks(const DGBVModel& m, const Bounds& b, int n_max, const Q& q) {
  Report r;
  r.title = "virasoro " + m.name;
  r.merge(check_virasoro_relations(m, n_max, std::max(b.T, n_max + 1)), "relations: ");
  Functional F = build_classical_bcov(m, std::max(3, b.N), b.T);
  for (int n = 1; n <= n_max; ++n) {
    if (n + 1 > b.T) {
      r.skip("classical L_" + std::to_string(n), "needs T >= n+1");
      continue;
    }
    r.merge(check_classical_virasoro(F, m, n), "classical: ");
  }
  r.merge(check_virasoro_kernels(m, q, n_max, b.T), "kernels: ");
  r.merge(check_effective_inverse(m, q, b.T), "inverse: ");
  r.merge(check_homotopic_virasoro(m, q, n_max, b), "homotopic: ");
  return r;
}

Report qme_checks(const DGBVModel& m, const Bounds& b, const std::vector<Q>& scales) {
  Report r;
  r.title = "qme " + m.name;
  std::vector<ObstructionResult> log;
  Functional base = build_quantized(m, b, &log);
  for (std::size_t i = 0; i < log.size(); ++i)
    r.add("genus " + std::to_string(i + 1) + " obstruction vanishes", log[i].solvable, log[i].witness);
  if (!r.all_pass()) return r;
  ScaledTheory th(m, 1, base);
  for (const Q& q : scales) {
    Functional F = th.at(q);
    r.merge(check_qme(F, m, q), "q=" + to_string(q) + " ");
    r.merge(check_axioms(F, m, q == 1), "q=" + to_string(q) + " ");
  }
  return r;
}

std::string correlator_text(const std::vector<CorrelatorEntry>& rows, const Config& c, const DGBVModel& m) {
  if (c.format == "json") {
    nlohmann::ordered_json j;
    j["tool_version"] = kToolVersion;
    j["model_hash"] = model_hash(m);
    j["polarization"] = c.polarization;
    auto arr = nlohmann::ordered_json::array();
    for (auto& e : rows) arr.push_back({{"g", e.g}, {"inputs", e.inputs}, {"value", to_string(e.value)}});
    j["correlators"] = arr;
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "# correlators " << m.name << " polarization " << c.polarization << "\n";
  for (auto& e : rows) {
    os << "g=" << e.g << " [";
    for (std::size_t i = 0; i < e.inputs.size(); ++i) os << (i ? " " : "") << e.inputs[i];
    os << "] " << to_string(e.value) << "\n";
  }
  os << "entries: " << rows.size() << "\n";
  return os.str();
}

std::string table_text(const std::vector<TableRow>& rows, const Config& c, const DGBVModel& m) {
  if (c.format == "json") {
    nlohmann::ordered_json j;
    j["tool_version"] = kToolVersion;
    j["model_hash"] = model_hash(m);
    auto arr = nlohmann::ordered_json::array();
    for (auto& r : rows)
      arr.push_back({{"inputs", r.inputs},
                     {"k", r.ks},
                     {"multinomial", to_string(r.multinomial)},
                     {"trace", to_string(r.trace)},
                     {"value", to_string(r.value)}});
    j["table"] = arr;
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "# D_nF table " << m.name << "\n";
  for (auto& r : rows) {
    os << "n=" << r.inputs.size() << " [";
    for (std::size_t i = 0; i < r.inputs.size(); ++i) os << (i ? " " : "") << r.inputs[i];
    os << "] k=(";
    for (std::size_t i = 0; i < r.ks.size(); ++i) os << (i ? "," : "") << r.ks[i];
    os << ") multinomial " << to_string(r.multinomial) << " trace " << to_string(r.trace) << " value "
       << to_string(r.value) << "\n";
  }
  return os.str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"BCOV desk-scale toolkit", "bcov"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  auto common = [&](CLI::App* s) {
    s->add_option("--model", c.model, "builtin name or model JSON path");
    s->add_option("--bounds", c.bounds, "G,N,T");
    s->add_option("--format", c.format, "text|json")->check(CLI::IsMember({"text", "json"}));
    s->add_option("--out", c.out, "output file");
  };

  auto* validate = app.add_subcommand("validate", "validate a model");
  common(validate);

  auto* classical = app.add_subcommand("classical", "classical BCOV functional");
  classical->require_subcommand(1);
  auto* table = classical->add_subcommand("table", "D_nF coefficient table");
  common(table);
  table->add_option("--n", c.n, "max arity");
  auto* ccheck = classical->add_subcommand("check", "master, string, dilaton equations");
  common(ccheck);

  auto* flow = app.add_subcommand("flow", "RG flow between scales");
  common(flow);
  flow->add_option("--from-q", c.from_q, "source scale");
  flow->add_option("--to-q", c.to_q, "target scale");
  flow->add_option("--in", c.in, "functional JSON (default: quantized classical theory at q=1)");

  auto* check = app.add_subcommand("check", "check suites");
  check->require_subcommand(1);
  auto* cfock = check->add_subcommand("fock", "Fock-space operator identities");
  auto* cvir = check->add_subcommand("virasoro", "Virasoro relations, classical and effective");
  auto* cqme = check->add_subcommand("qme", "QME and flow consistency across scales");
  auto* call = check->add_subcommand("all", "every suite");
  for (auto* s : {cfock, cvir, cqme, call}) {
    common(s);
    s->add_option("--scales", c.scales, "comma separated p/q");
  }
  for (auto* s : {cvir, call}) {
    s->add_option("--n-max", c.n_max, "highest Virasoro index");
    s->add_option("--q", c.q, "scale for single-scale checks");
  }

  auto* quant = app.add_subcommand("quantize", "quantum master equation and obstructions");
  quant->require_subcommand(1);
  auto* qcheck = quant->add_subcommand("check", "QME and axioms for a given theory");
  common(qcheck);
  qcheck->add_option("--theory", c.theory, "functional JSON")->required();
  qcheck->add_option("--q", c.quant_q, "scale of the theory");
  auto* qsolve = quant->add_subcommand("solve", "solve the genus-g obstruction");
  common(qsolve);
  qsolve->add_option("--target-g", c.target_g, "genus to solve for");
  qsolve->add_option("--constraints", c.constraints, "none|dilaton")->check(CLI::IsMember({"none", "dilaton"}));
  qsolve->add_flag("--dilaton-top", c.dilaton_top, "also impose L_0 rows at arity N");
  qsolve->add_option("--theory", c.theory, "lower-genus functional JSON");
  qsolve->add_option("--q", c.quant_q, "scale of the theory");

  auto* corr = app.add_subcommand("correlators", "correlators at q=0 on harmonic inputs");
  common(corr);
  corr->add_option("--g-max", c.g_max, "max genus");
  corr->add_option("--n-max", c.n_max, "max arity");
  corr->add_option("--polarization", c.polarization, "file|default");
  corr->add_option("--theory", c.theory, "base functional at q=1");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << (e.get_name() == "CallForVersion" ? std::string(kToolVersion) + "\n" : app.help());
      return 0;
    }
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    DGBVModel m = resolve_model(c.model);
    Bounds b = parse_bounds(c.bounds);
    if (*validate) return emit_report(c, validate_dgbv(m), m, out);
    if (*table) {
      emit(c, table_text(classical_table(m, c.n), c, m), out);
      return 0;
    }
    if (*ccheck) return emit_report(c, classical_checks(m, b), m, out);
    if (*flow) {
      Q q1 = parse_scale(c.from_q), q2 = parse_scale(c.to_q);
      Functional F;
      if (c.in.empty()) {
        if (q1 != 1) throw UsageError("without --in the source scale is 1");
        F = build_quantized(m, b);
      } else {
        c.theory = c.in;
        F = load_theory(c, m, b);
      }
      KernelFactory kf(m);
      Functional G = q1 >= q2 ? rg_flow(F, kf.propagator(q1, q2)) : rg_flow(F, kf.propagator(q2, q1).scaled(-1));
      G.bounds = b;
      emit(c, functional_to_json(G, FieldSpace(m, b.T)), out);
      return 0;
    }
    if (*cfock) return emit_report(c, fock_checks(m, b, parse_scales(c.scales)), m, out);
    if (*cvir) return emit_report(c, virasoro_checks(m, b, c.n_max, parse_scale(c.q)), m, out);
    if (*cqme) return emit_report(c, qme_checks(m, b, parse_scales(c.scales)), m, out);
    if (*call) {
      auto scales = parse_scales(c.scales);
      Report r;
      r.title = "all " + m.name;
      r.merge(validate_dgbv(m), "validate: ");
      r.merge(classical_checks(m, b), "classical: ");
      r.merge(fock_checks(m, b, scales), "fock: ");
      r.merge(virasoro_checks(m, b, c.n_max, parse_scale(c.q)), "virasoro: ");
      r.merge(qme_checks(m, b, scales), "qme: ");
      return emit_report(c, r, m, out);
    }
    if (*qcheck) {
      Q q = parse_scale(c.quant_q);
      Functional F = load_theory(c, m, b);
      Report r;
      r.title = "quantize check " + m.name + " q=" + to_string(q);
      r.merge(check_qme(F, m, q));
      r.merge(check_axioms(F, m, q == 1));
      return emit_report(c, r, m, out);
    }
    if (*qsolve) {
      Q q = parse_scale(c.quant_q);
      if (c.target_g < 1 || c.target_g > b.G) throw UsageError("--target-g must lie in 1..G");
      Functional F;
      if (c.theory.empty()) {
        F = build_quantized(m, Bounds{c.target_g - 1, arity_bound(b, c.target_g - 1), b.T});
        if (q != 1) F = rg_flow(F, KernelFactory(m).propagator(1, q));
      } else {
        F = load_theory(c, m, b);
      }
      ObstructionOptions opt;
      opt.dilaton = c.constraints == "dilaton";
      opt.dilaton_top = c.dilaton_top;
      const int g = c.target_g;
      auto res = solve_obstruction(F, m, g, Bounds{g, arity_bound(b, g), b.T}, q, opt);
      Report r;
      r.title = "quantize solve " + m.name + " g=" + std::to_string(g) + " q=" + to_string(q);
      r.add("genus " + std::to_string(g) + " obstruction vanishes", res.solvable, res.witness);
      r.note("constraints", c.constraints + (c.dilaton_top ? "+top" : ""));
      r.note("unknowns", std::to_string(res.unknowns));
      r.note("homotopy unknowns", std::to_string(res.homotopy_unknowns));
      r.note("equations", std::to_string(res.equations));
      r.note("rank", std::to_string(res.rank));
      if (res.solvable) {
        r.note("solution dim", std::to_string(res.solution_dim));
        r.note("homotopy image dim", std::to_string(res.homotopy_dim));
        r.note("solution dim mod homotopy", std::to_string(res.dim_mod_homotopy));
        r.note("particular terms", std::to_string(res.particular.size()));
      }
      return emit_report(c, r, m, out);
    }
    if (*corr) {
      Functional base = c.theory.empty() ? build_quantized(m, b) : load_theory(c, m, b);
      ScaledTheory th(m, 1, base);
      HarmonicSpace h = harmonic_space(m, b.T);
      std::optional<Polarization> pol;
      if (c.polarization != "default") {
        try {
          pol = parse_polarization(slurp(c.polarization), h);
        } catch (UsageError&) {
          throw;
        } catch (std::exception& e) {
          throw UsageError(c.polarization + ": " + e.what());
        }
      }
      auto rows = correlators(th, pol ? &*pol : nullptr, c.g_max, c.n_max);
      emit(c, correlator_text(rows, c, m), out);
      return 0;
    }
  } catch (const TruncationUnderflow& e) {
    err << "truncation underflow: " << e.what() << "\n";
    return 3;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ModelError& e) {
    err << "model error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace bcov
