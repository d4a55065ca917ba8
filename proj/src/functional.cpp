#include "bcov/functional.hpp"

#include <algorithm>
#include <json.hpp>
#include <stdexcept>

namespace bcov {

using json = nlohmann::ordered_json;

std::vector<Var> FieldSpace::vars() const {
  std::vector<Var> r;
  for (int a = 0; a < model->dim(); ++a)
    for (int k = 0; k <= T; ++k) r.push_back(var(a, k));
  return r;
}

std::string FieldSpace::label(Var v) const {
  if (v == DELTA) return "delta";
  std::string s = model->basis.labels[var_alg(v)] + "@" + std::to_string(var_t(v));
  if (var_copy(v)) s += "#" + std::to_string(var_copy(v));
  return s;
}

Var FieldSpace::parse(const std::string& label) const {
  if (label == "delta") return DELTA;
  auto at = label.rfind('@');
  if (at == std::string::npos) throw std::invalid_argument("field label '" + label + "' lacks @k");
  int a = model->basis.index_of(label.substr(0, at));
  if (a < 0) throw std::invalid_argument("unknown basis label in '" + label + "'");
  int k = 0;
  try {
    std::size_t used = 0;
    k = std::stoi(label.substr(at + 1), &used);
    if (used != label.size() - at - 1) throw std::invalid_argument("");
  } catch (...) {
    throw std::invalid_argument("bad t-power in '" + label + "'");
  }
  if (k < 0 || k > 511) throw std::invalid_argument("t-power out of range in '" + label + "'");
  return var(a, k);
}

namespace {
const Poly kEmpty;
}

bool Functional::is_zero() const {
  for (auto& [g, p] : by_genus)
    if (!p.is_zero()) return false;
  return true;
}

const Poly& Functional::get(int g) const {
  auto it = by_genus.find(g);
  return it == by_genus.end() ? kEmpty : it->second;
}

void Functional::prune() {
  for (auto it = by_genus.begin(); it != by_genus.end();)
    it = it->second.is_zero() ? by_genus.erase(it) : std::next(it);
}

Functional& Functional::operator+=(const Functional& o) {
  for (auto& [g, p] : o.by_genus) by_genus[g] += p;
  prune();
  return *this;
}

Functional& Functional::operator-=(const Functional& o) {
  for (auto& [g, p] : o.by_genus) by_genus[g] -= p;
  prune();
  return *this;
}

Functional Functional::scaled(const Q& s) const {
  Functional r;
  r.bounds = bounds;
  for (auto& [g, p] : by_genus) r.by_genus[g] = p.scaled(s);
  r.prune();
  return r;
}

Functional Functional::shifted(int dg) const {
  Functional r;
  r.bounds = bounds;
  for (auto& [g, p] : by_genus) r.by_genus[g + dg] = p;
  return r;
}

Functional Functional::truncated(int G, int N) const {
  Functional r;
  r.bounds = bounds;
  for (auto& [g, p] : by_genus)
    if (g <= G) r.by_genus[g] = truncate_arity(p, N);
  r.prune();
  return r;
}

std::size_t Functional::size() const {
  std::size_t n = 0;
  for (auto& [g, p] : by_genus) n += p.size();
  return n;
}

bool Functional::operator==(const Functional& o) const {
  Functional d = *this;
  d -= o;
  return d.is_zero();
}

Functional operator+(Functional a, const Functional& b) { return a += b; }
Functional operator-(Functional a, const Functional& b) { return a -= b; }

Q Kernel2::at(Var i, Var j) const {
  if (i <= j) {
    auto it = upper.find({i, j});
    return it == upper.end() ? Q(0) : it->second;
  }
  auto it = upper.find({j, i});
  if (it == upper.end()) return 0;
  return (var_parity(i) & var_parity(j)) ? Q(-it->second) : it->second;
}

int Kernel2::parity() const {
  if (upper.empty()) return 0;
  auto& k = upper.begin()->first;
  return (var_parity(k.first) + var_parity(k.second)) & 1;
}

Tensor2 Kernel2::full() const {
  Tensor2 t;
  for (auto& [k, c] : upper) {
    t[k] = c;
    if (k.first != k.second) t[{k.second, k.first}] = (var_parity(k.first) & var_parity(k.second)) ? Q(-c) : c;
  }
  return t;
}

Kernel2& Kernel2::operator+=(const Kernel2& o) {
  for (auto& [k, c] : o.upper) {
    Q& v = upper[k];
    v += c;
    if (v == 0) upper.erase(k);
  }
  return *this;
}

Kernel2& Kernel2::operator-=(const Kernel2& o) { return *this += o.scaled(-1); }

Kernel2 Kernel2::scaled(const Q& s) const {
  Kernel2 r;
  if (s == 0) return r;
  for (auto& [k, c] : upper) r.upper[k] = c * s;
  return r;
}

Kernel2 operator+(Kernel2 a, const Kernel2& b) { return a += b; }
Kernel2 operator-(Kernel2 a, const Kernel2& b) { return a -= b; }

bool graded_symmetric(const Tensor2& t, std::string* witness) {
  for (auto& [k, c] : t) {
    if (c == 0) continue;
    auto it = t.find({k.second, k.first});
    Q other = it == t.end() ? Q(0) : it->second;
    Q want = (var_parity(k.first) & var_parity(k.second)) ? Q(-c) : c;
    if (other != want) {
      if (witness) *witness = std::to_string(k.first) + "," + std::to_string(k.second);
      return false;
    }
  }
  return true;
}

Kernel2 compress(const Tensor2& t) {
  std::string w;
  if (!graded_symmetric(t, &w)) throw std::domain_error("kernel not graded symmetric at " + w);
  Kernel2 K;
  for (auto& [k, c] : t)
    if (k.first <= k.second && c != 0) K.upper[k] = c;
  return K;
}

void FieldMap::add(Var from, Var to, const Q& c) {
  if (c == 0) return;
  auto& v = image[from];
  for (auto& e : v)
    if (e.first == to) {
      e.second += c;
      if (e.second == 0) {
        v.erase(std::find_if(v.begin(), v.end(), [&](auto& x) { return x.first == to; }));
        if (v.empty()) image.erase(from);
      }
      return;
    }
  v.emplace_back(to, c);
}

Poly contract(const Kernel2& K, const Poly& p) {
  Poly r;
  if (K.is_zero()) return r;
  static const Q half(1, 2);
  Mono w1, w2;
  std::vector<std::pair<Var, int>> dv;
  for (auto& [u, c] : p.terms) {
    if (u.size() < 2) continue;
    dv.clear();
    for (Var v : u) {
      if (!dv.empty() && dv.back().first == v)
        ++dv.back().second;
      else
        dv.emplace_back(v, 1);
    }
    for (std::size_t a = 0; a < dv.size(); ++a)
      for (std::size_t b = a; b < dv.size(); ++b) {
        Var x = dv[a].first, y = dv[b].first;
        if (a == b && dv[a].second < 2) continue;
        auto it = K.upper.find({x, y});
        if (it == K.upper.end()) continue;
        long s1 = mono_deriv(y, u, w1);
        long s2 = mono_deriv(x, w1, w2);
        Q coef = it->second * c * (s1 * s2);
        if (a == b) coef *= half;
        r.add(w2, coef);
      }
  }
  return r;
}

Poly bracket(const Kernel2& K, const Poly& F, const Poly& G) {
  if (K.is_zero() || F.is_zero() || G.is_zero()) return {};
  int pf = parity(F);
  Poly r = contract(K, F * G);
  r -= contract(K, F) * G;
  Poly t = F * contract(K, G);
  if ((K.parity() & pf) != 0)
    r += t;
  else
    r -= t;
  return r;
}

Poly bracket_wick(const Kernel2& K, const Poly& F, const Poly& G) {
  Poly r;
  if (K.is_zero() || F.is_zero() || G.is_zero()) return r;
  int pf = parity(F);
  for (auto& [ij, c] : K.full()) {
    Poly dF = deriv(ij.first, F);
    if (dF.is_zero()) continue;
    Poly dG = deriv(ij.second, G);
    if (dG.is_zero()) continue;
    Q s = (var_parity(ij.second) & pf) ? Q(-c) : c;
    r += (dF * dG).scaled(s);
  }
  return r;
}

Poly induced(const FieldMap& D, const Poly& p) {
  Poly r;
  if (D.is_zero()) return r;
  std::map<Var, std::vector<std::pair<Var, Q>>> tr;  // target -> (source, D_ij)
  for (auto& [j, img] : D.image)
    for (auto& [i, c] : img) tr[i].emplace_back(j, c);
  Mono w, out;
  for (auto& [u, c] : p.terms) {
    for (std::size_t a = 0; a < u.size(); ++a) {
      if (a > 0 && u[a] == u[a - 1]) continue;
      Var i = u[a];
      auto it = tr.find(i);
      if (it == tr.end()) continue;
      long s = mono_deriv(i, u, w);
      Q base = c * s;
      if ((D.degree & 1) && var_parity(i)) base = -base;
      for (auto& [j, dij] : it->second) {
        int s2 = mono_mul(Mono{j}, w, out);
        if (s2) r.add(out, Q(s2 > 0 ? Q(base * dij) : Q(-(base * dij))));
      }
    }
  }
  return r;
}

Poly directional(const FieldVec& v, const Poly& p) {
  Poly r;
  for (auto& [x, c] : v) r += deriv(x, p).scaled(c);
  return r;
}

Q evaluate(const Poly& p, const std::vector<FieldVec>& args) {
  Poly cur = truncate_arity(p, int(args.size()));
  for (auto it = args.rbegin(); it != args.rend(); ++it) cur = directional(*it, cur);
  auto f = cur.terms.find(Mono{});
  return f == cur.terms.end() ? Q(0) : f->second;
}

Functional contract_kernel(const Functional& F, const Kernel2& K) {
  Functional r;
  r.bounds = F.bounds;
  for (auto& [g, p] : F.by_genus) r.by_genus[g] = contract(K, p);
  r.prune();
  return r;
}

Functional kernel_bracket(const Functional& F, const Functional& G, const Kernel2& K) {
  Functional r;
  r.bounds = F.bounds;
  for (auto& [g1, p1] : F.by_genus)
    for (auto& [g2, p2] : G.by_genus) r.by_genus[g1 + g2] += bracket(K, p1, p2);
  r.prune();
  return r;
}

Functional induced_derivation(const FieldMap& D, const Functional& F) {
  Functional r;
  r.bounds = F.bounds;
  for (auto& [g, p] : F.by_genus) r.by_genus[g] = induced(D, p);
  r.prune();
  return r;
}

Functional field_contraction(const Functional& F, const FieldVec& v) {
  Functional r;
  r.bounds = F.bounds;
  for (auto& [g, p] : F.by_genus) r.by_genus[g] = directional(v, p);
  r.prune();
  return r;
}

Functional multiply(const Functional& F, const Functional& G) {
  Functional r;
  r.bounds = F.bounds;
  for (auto& [g1, p1] : F.by_genus)
    for (auto& [g2, p2] : G.by_genus) r.by_genus[g1 + g2] += p1 * p2;
  r.prune();
  return r;
}

Q evaluate(const Functional& F, const std::vector<FieldVec>& args, int g) { return evaluate(F.get(g), args); }

int functional_degree(const FieldSpace& fs, const Mono& u) {
  int d = 0;
  for (Var v : u)
    if (v != DELTA) d -= fs.shifted_degree(v);
  return d;
}

Q functional_weight(const FieldSpace& fs, const Mono& u) {
  Q w = 0;
  for (Var v : u)
    if (v != DELTA) w -= fs.shifted_weight(v);
  return w;
}

std::string mono_label(const FieldSpace& fs, const Mono& u) {
  std::string s = "[";
  for (std::size_t i = 0; i < u.size(); ++i) s += (i ? " " : "") + fs.label(u[i]);
  return s + "]";
}

std::string first_term(const Functional& F, const FieldSpace& fs) {
  for (auto& [g, p] : F.by_genus)
    if (!p.is_zero()) {
      auto& [u, c] = *p.terms.begin();
      return "g=" + std::to_string(g) + " " + mono_label(fs, u) + " coeff " + to_string(c);
    }
  return {};
}

std::string functional_to_json(const Functional& F, const FieldSpace& fs) {
  json j;
  j["bounds"] = {{"G", F.bounds.G}, {"N", F.bounds.N}, {"T", F.bounds.T}};
  json terms = json::array();
  for (auto& [g, p] : F.by_genus)
    for (auto& [u, c] : p.terms) {
      json mono = json::array();
      for (Var v : u) mono.push_back(fs.label(v));
      terms.push_back({{"g", g}, {"monomial", mono}, {"coeff", to_string(c)}});
    }
  j["terms"] = terms;
  return j.dump(2) + "\n";
}

Functional functional_from_json(const std::string& text, const FieldSpace& fs) {
  json j = json::parse(text);
  Functional F;
  if (j.contains("bounds")) {
    auto& b = j["bounds"];
    F.bounds = {b.value("G", 0), b.value("N", 0), b.value("T", fs.T)};
  }
  if (!j.contains("terms") || !j["terms"].is_array()) throw std::invalid_argument("functional: missing terms list");
  for (auto& t : j["terms"]) {
    int g = t.at("g").get<int>();
    Poly acc = Poly::constant(1);
    for (auto& l : t.at("monomial")) acc = acc * Poly::monomial(Mono{fs.parse(l.get<std::string>())});
    const json& c = t.at("coeff");
    Q coeff = c.is_string() ? parse_rational(c.get<std::string>()) : Q(c.get<long>());
    F.by_genus[g] += acc.scaled(coeff);
  }
  F.prune();
  return F;
}

namespace {
void enum_monos(const std::vector<Var>& vars, int n_max, std::size_t start, Mono& cur, std::vector<Mono>& out) {
  out.push_back(cur);
  if (int(cur.size()) == n_max) return;
  for (std::size_t i = start; i < vars.size(); ++i) {
    if (!cur.empty() && cur.back() == vars[i] && var_parity(vars[i])) continue;
    cur.push_back(vars[i]);
    enum_monos(vars, n_max, i, cur, out);
    cur.pop_back();
  }
}
}  // namespace

std::vector<Mono> monomials_up_to(const std::vector<Var>& vars, int n_max) {
  std::vector<Var> v = vars;
  std::sort(v.begin(), v.end());
  std::vector<Mono> out;
  Mono cur;
  enum_monos(v, n_max, 0, cur, out);
  return out;
}

}  // namespace bcov
