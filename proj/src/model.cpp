#include "bcov/model.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace bcov {

using json = nlohmann::ordered_json;

GradedVector DGBVModel::mul(const GradedVector& x, const GradedVector& y) const {
  GradedVector r;
  for (auto& [a, ca] : x.coords)
    for (auto& [b, cb] : y.coords)
      for (auto& [c, v] : product[a][b].coords) r.add(c, ca * cb * v);
  return r;
}

Q DGBVModel::tr(const GradedVector& x) const {
  Q r = 0;
  for (auto& [i, c] : x.coords) r += c * trace[i];
  return r;
}

Q DGBVModel::pairing(int a, int b) const {
  Q r = 0;
  for (auto& [c, v] : product[a][b].coords) r += v * trace[c];
  return r;
}

Matrix DGBVModel::pairing_matrix() const {
  Matrix G(dim(), dim());
  for (int a = 0; a < dim(); ++a)
    for (int b = 0; b < dim(); ++b) G(a, b) = pairing(a, b);
  return G;
}

namespace {

std::string vec_str(const DGBVModel& m, const GradedVector& v) {
  if (v.is_zero()) return "0";
  std::string s;
  for (auto& [i, c] : v.coords) {
    if (!s.empty()) s += " + ";
    s += "(" + to_string(c) + ")" + m.basis.labels[i];
  }
  return s;
}

GradedVector col(const Matrix& M, int j) {
  GradedVector v;
  for (int i = 0; i < M.rows(); ++i) v.add(i, M(i, j));
  return v;
}

int sgnpow(int e) { return (e & 1) ? -1 : 1; }

}  // namespace

GradedVector bv_bracket(const DGBVModel& m, const GradedVector& a, const GradedVector& b) {
  auto da = a.degree(m.basis), db = b.degree(m.basis);
  if ((!a.is_zero() && !da) || (!b.is_zero() && !db)) throw std::invalid_argument("bv_bracket: inhomogeneous input");
  if (a.is_zero() || b.is_zero()) return {};
  GradedVector r = apply(m.del, m.mul(a, b));
  r -= m.mul(apply(m.del, a), b);
  GradedVector t = m.mul(a, apply(m.del, b));
  r -= t.scaled(sgnpow(*da));
  return r;
}

Report validate_dgbv(const DGBVModel& m) {
  Report rep;
  rep.title = "validate " + m.name;
  const int n = m.dim();
  auto L = [&](int i) { return m.basis.labels[i]; };
  auto e = [](int i) { return GradedVector::basis(i); };
  bool shapes = int(m.product.size()) == n && m.d_bar.rows() == n && m.d_bar.cols() == n && m.del.rows() == n &&
                m.del.cols() == n && int(m.trace.size()) == n && int(m.metric.size()) == n;
  for (auto& row : m.product) shapes = shapes && int(row.size()) == n;
  rep.add("dimensions", shapes);
  if (!shapes) return rep;
  auto in_window = [&](std::initializer_list<int> idx) {
    if (m.modes.empty()) return true;
    int s = 0;
    for (int i : idx) {
      s += m.modes[i];
      if (std::abs(s) > m.mode_window) return false;
    }
    return true;
  };
  auto first_fail = [&](const std::string& id, auto&& test) {
    std::string w, d;
    bool ok = test(w, d);
    rep.add(id, ok, w, d);
  };

  first_fail("product degree 0", [&](std::string& w, std::string&) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (auto& [c, v] : m.product[a][b].coords)
          if (m.degree(c) != m.degree(a) + m.degree(b)) { w = L(a) + "*" + L(b); return false; }
    return true;
  });
  first_fail("graded commutative", [&](std::string& w, std::string& d) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        GradedVector x = m.product[a][b];
        x -= m.product[b][a].scaled(sgnpow(m.degree(a) * m.degree(b)));
        if (!x.is_zero()) { w = L(a) + "," + L(b); d = vec_str(m, x); return false; }
      }
    return true;
  });
  first_fail("associative", [&](std::string& w, std::string& d) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          if (!in_window({a, b, c}) || !in_window({b, c})) continue;
          GradedVector x = m.mul(m.product[a][b], e(c));
          x -= m.mul(e(a), m.product[b][c]);
          if (!x.is_zero()) { w = L(a) + "," + L(b) + "," + L(c); d = vec_str(m, x); return false; }
        }
    return true;
  });
  first_fail("unit", [&](std::string& w, std::string&) {
    if (m.unit < 0 || m.unit >= n) { w = "missing"; return false; }
    for (int a = 0; a < n; ++a)
      if (!(m.product[m.unit][a] == e(a))) { w = L(a); return false; }
    return true;
  });
  auto homog = [&](const Matrix& M, int shift, std::string& w) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        if (M(i, j) != 0 && m.degree(i) != m.degree(j) + shift) { w = L(j); return false; }
    return true;
  };
  first_fail("d_bar degree +1", [&](std::string& w, std::string&) { return homog(m.d_bar, 1, w); });
  first_fail("del degree -1", [&](std::string& w, std::string&) { return homog(m.del, -1, w); });
  auto zero_mat = [&](const Matrix& M, std::string& w) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        if (M(i, j) != 0) { w = L(j); return false; }
    return true;
  };
  first_fail("d_bar^2=0", [&](std::string& w, std::string&) { return zero_mat(m.d_bar * m.d_bar, w); });
  first_fail("del^2=0", [&](std::string& w, std::string&) { return zero_mat(m.del * m.del, w); });
  first_fail("d_bar del + del d_bar = 0",
             [&](std::string& w, std::string&) { return zero_mat(m.d_bar * m.del + m.del * m.d_bar, w); });
  first_fail("d_bar derivation", [&](std::string& w, std::string& d) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (!in_window({a, b})) continue;
        GradedVector x = apply(m.d_bar, m.product[a][b]);
        x -= m.mul(col(m.d_bar, a), e(b));
        x -= m.mul(e(a), col(m.d_bar, b)).scaled(sgnpow(m.degree(a)));
        if (!x.is_zero()) { w = L(a) + "," + L(b); d = vec_str(m, x); return false; }
      }
    return true;
  });
  first_fail("bracket derivation (order two del)", [&](std::string& w, std::string& d) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          if (!in_window({a, b, c}) || !in_window({b, c}) || !in_window({a, c})) continue;
          GradedVector x = bv_bracket(m, e(a), m.product[b][c]);
          x -= m.mul(bv_bracket(m, e(a), e(b)), e(c));
          x -= m.mul(e(b), bv_bracket(m, e(a), e(c))).scaled(sgnpow((m.degree(a) - 1) * m.degree(b)));
          if (!x.is_zero()) { w = L(a) + "," + L(b) + "," + L(c); d = vec_str(m, x); return false; }
        }
    return true;
  });
  first_fail("Tr(d_bar a)=0", [&](std::string& w, std::string&) {
    for (int a = 0; a < n; ++a)
      if (m.tr(col(m.d_bar, a)) != 0) { w = L(a); return false; }
    return true;
  });
  first_fail("Tr(del a)=0", [&](std::string& w, std::string&) {
    for (int a = 0; a < n; ++a)
      if (m.tr(col(m.del, a)) != 0) { w = L(a); return false; }
    return true;
  });
  Matrix G = m.pairing_matrix();
  first_fail("pairing graded symmetric", [&](std::string& w, std::string&) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (G(a, b) != sgnpow(m.degree(a) * m.degree(b)) * G(b, a)) { w = L(a) + "," + L(b); return false; }
    return true;
  });
  first_fail("pairing nondegenerate", [&](std::string& w, std::string&) {
    int r = rank(G);
    if (r < n) { w = "rank " + std::to_string(r) + " < " + std::to_string(n); return false; }
    return true;
  });
  auto pair_vec = [&](const GradedVector& x, const GradedVector& y) { return m.tr(m.mul(x, y)); };
  first_fail("d_bar skew self-adjoint", [&](std::string& w, std::string& d) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Q v = pair_vec(col(m.d_bar, a), e(b)) + sgnpow(m.degree(a)) * pair_vec(e(a), col(m.d_bar, b));
        if (v != 0) { w = L(a) + "," + L(b); d = to_string(v); return false; }
      }
    return true;
  });
  first_fail("del self-adjoint", [&](std::string& w, std::string& d) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Q v = pair_vec(col(m.del, a), e(b)) - sgnpow(m.degree(a)) * pair_vec(e(a), col(m.del, b));
        if (v != 0) { w = L(a) + "," + L(b); d = to_string(v); return false; }
      }
    return true;
  });
  first_fail("metric positive", [&](std::string& w, std::string&) {
    for (int a = 0; a < n; ++a)
      if (m.metric[a] <= 0) { w = L(a); return false; }
    return true;
  });
  return rep;
}

DGBVModel builtin_elliptic_cohomology() {
  DGBVModel m;
  m.name = "elliptic-cohomology";
  m.dim_x = 1;
  m.basis.add("1", {0, -1});
  m.basis.add("theta", {1, 0});
  m.basis.add("eta", {1, -1});
  m.basis.add("theta_eta", {2, 0});
  const int n = 4;
  m.product.assign(n, std::vector<GradedVector>(n));
  for (int a = 0; a < n; ++a) {
    m.product[0][a] = GradedVector::basis(a);
    m.product[a][0] = GradedVector::basis(a);
  }
  m.product[1][2] = GradedVector::basis(3, 1);
  m.product[2][1] = GradedVector::basis(3, -1);
  m.unit = 0;
  m.d_bar = Matrix(n, n);
  m.del = Matrix(n, n);
  m.trace = {0, 0, 0, 1};
  m.metric.assign(n, Q(1));
  return m;
}

DGBVModel builtin_fourier_torus(int M, const Q& eta_weight) {
  if (M < 1) throw std::invalid_argument("fourier-torus needs M >= 1");
  DGBVModel m;
  m.name = "fourier-torus(" + std::to_string(M) + ")";
  if (eta_weight != 1) m.name += "[eta-metric " + to_string(eta_weight) + "]";
  m.dim_x = 1;
  struct Key { int mode, th, et; };
  std::vector<Key> keys;
  const char* suffix[2][2] = {{"", ".eta"}, {".theta", ".theta_eta"}};
  for (int md = -M; md <= M; ++md)
    for (auto [th, et] : {std::pair{0, 0}, {1, 0}, {0, 1}, {1, 1}}) {
      keys.push_back({md, th, et});
      m.basis.add("f" + std::to_string(md) + suffix[th][et], {th + et, Q(th - 1)});
      m.modes.push_back(md);
    }
  m.mode_window = M;
  const int n = int(keys.size());
  auto idx = [&](int md, int th, int et) { return (md + M) * 4 + (th ? 1 : 0) + (et ? 2 : 0); };
  m.product.assign(n, std::vector<GradedVector>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto a = keys[i], b = keys[j];
      if (std::abs(a.mode + b.mode) > M || (a.th && b.th) || (a.et && b.et)) continue;
      int s = (a.et && b.th) ? -1 : 1;
      m.product[i][j] = GradedVector::basis(idx(a.mode + b.mode, a.th | b.th, a.et | b.et), s);
    }
  m.unit = idx(0, 0, 0);
  m.d_bar = Matrix(n, n);
  m.del = Matrix(n, n);
  for (int i = 0; i < n; ++i) {
    auto k = keys[i];
    if (!k.et) m.d_bar(idx(k.mode, k.th, 1), i) += k.mode * (k.th ? -1 : 1);
    if (k.th) m.del(idx(k.mode, 0, k.et), i) += k.mode;
  }
  m.trace.assign(n, Q(0));
  m.trace[idx(0, 1, 1)] = 1;
  m.metric.assign(n, Q(1));
  for (int i = 0; i < n; ++i)
    if (keys[i].et) m.metric[i] = eta_weight;
  return m;
}

namespace {

Q coeff_of(const json& j, const std::string& path) {
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::exception& e) {
      throw ModelError(path, e.what());
    }
  }
  if (j.is_number_integer()) return Q(j.get<long>());
  throw ModelError(path, "expected rational written as \"p/q\" string or integer");
}

int label_of(const DGBVModel& m, const json& j, const std::string& path) {
  if (!j.is_string()) throw ModelError(path, "expected basis label");
  int i = m.basis.index_of(j.get<std::string>());
  if (i < 0) throw ModelError(path, "unknown basis label '" + j.get<std::string>() + "'");
  return i;
}

const json& need(const json& j, const char* key) {
  if (!j.contains(key)) throw ModelError(key, "missing required field");
  return j.at(key);
}

Matrix read_map(const DGBVModel& m, const json& j, const std::string& key) {
  const int n = m.dim();
  Matrix M(n, n);
  if (!j.contains(key)) return M;
  const json& arr = j.at(key);
  if (arr.is_object() && arr.contains("matrix")) {
    // dense form, rows indexed by target
    const json& D = arr.at("matrix");
    bool square = D.is_array() && int(D.size()) == n;
    for (size_t r = 0; square && r < D.size(); ++r) square = D[r].is_array() && int(D[r].size()) == n;
    if (!square) throw ModelError(key, "dimension error: expected " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        M(r, c) = coeff_of(D[r][c], key + ".matrix[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    return M;
  }
  if (!arr.is_array()) throw ModelError(key, "expected list of [from,to,coeff]");
  for (size_t i = 0; i < arr.size(); ++i) {
    std::string p = key + "[" + std::to_string(i) + "]";
    if (!arr[i].is_array() || arr[i].size() != 3) throw ModelError(p, "expected [from,to,coeff]");
    int from = label_of(m, arr[i][0], p + "[0]"), to = label_of(m, arr[i][1], p + "[1]");
    M(to, from) += coeff_of(arr[i][2], p + "[2]");
  }
  return M;
}

}  // namespace

DGBVModel load_model(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ModelError("$", std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ModelError("$", "expected object");
  DGBVModel m;
  m.name = j.value("name", std::string("user-model"));
  const json& basis = need(j, "basis");
  if (!basis.is_array() || basis.empty()) throw ModelError("basis", "expected non-empty list");
  for (size_t i = 0; i < basis.size(); ++i) {
    std::string p = "basis[" + std::to_string(i) + "]";
    const json& b = basis[i];
    if (!b.is_object() || !b.contains("label") || !b.contains("degree") || !b.contains("hodge_weight"))
      throw ModelError(p, "expected {label, degree, hodge_weight}");
    if (!b["degree"].is_number_integer()) throw ModelError(p + ".degree", "expected integer");
    Grading g{b["degree"].get<int>(), coeff_of(b["hodge_weight"], p + ".hodge_weight")};
    try {
      m.basis.add(b["label"].get<std::string>(), g);
    } catch (const std::exception& e) {
      throw ModelError(p + ".label", e.what());
    }
  }
  const int n = m.dim();
  const json& dx = need(j, "dim_x");
  if (!dx.is_number_integer() || dx.get<int>() < 0) throw ModelError("dim_x", "expected non-negative integer");
  m.dim_x = dx.get<int>();
  m.unit = label_of(m, need(j, "unit"), "unit");
  m.product.assign(n, std::vector<GradedVector>(n));
  const json& prod = need(j, "product");
  if (!prod.is_array()) throw ModelError("product", "expected list of [a,b,c,coeff]");
  for (size_t i = 0; i < prod.size(); ++i) {
    std::string p = "product[" + std::to_string(i) + "]";
    if (!prod[i].is_array() || prod[i].size() != 4) throw ModelError(p, "expected [a,b,c,coeff]");
    int a = label_of(m, prod[i][0], p + "[0]"), b = label_of(m, prod[i][1], p + "[1]"),
        c = label_of(m, prod[i][2], p + "[2]");
    m.product[a][b].add(c, coeff_of(prod[i][3], p + "[3]"));
  }
  m.d_bar = read_map(m, j, "d_bar");
  m.del = read_map(m, j, "del");
  const json& tr = need(j, "trace");
  if (!tr.is_array()) throw ModelError("trace", "expected list of [label,coeff]");
  m.trace.assign(n, Q(0));
  for (size_t i = 0; i < tr.size(); ++i) {
    std::string p = "trace[" + std::to_string(i) + "]";
    if (!tr[i].is_array() || tr[i].size() != 2) throw ModelError(p, "expected [label,coeff]");
    m.trace[label_of(m, tr[i][0], p + "[0]")] += coeff_of(tr[i][1], p + "[1]");
  }
  m.metric.assign(n, Q(1));
  if (j.contains("metric")) {
    const json& mt = j.at("metric");
    if (!mt.is_array()) throw ModelError("metric", "expected list of [label,coeff]");
    for (size_t i = 0; i < mt.size(); ++i) {
      std::string p = "metric[" + std::to_string(i) + "]";
      if (!mt[i].is_array() || mt[i].size() != 2) throw ModelError(p, "expected [label,coeff]");
      Q v = coeff_of(mt[i][1], p + "[1]");
      if (v <= 0) throw ModelError(p, "metric entries must be positive");
      m.metric[label_of(m, mt[i][0], p + "[0]")] = v;
    }
  }
  if (j.contains("modes")) {
    m.modes.assign(n, 0);
    const json& md = j.at("modes");
    for (size_t i = 0; i < md.size(); ++i) {
      std::string p = "modes[" + std::to_string(i) + "]";
      if (!md[i].is_array() || md[i].size() != 2 || !md[i][1].is_number_integer())
        throw ModelError(p, "expected [label,integer]");
      m.modes[label_of(m, md[i][0], p + "[0]")] = md[i][1].get<int>();
    }
    m.mode_window = j.value("mode_window", 0);
  }
  Report rep = validate_dgbv(m);
  if (!rep.all_pass()) throw ModelError("$", "model failed validation:\n" + rep.to_text());
  return m;
}

std::string model_to_json(const DGBVModel& m) {
  json j;
  j["name"] = m.name;
  const int n = m.dim();
  json basis = json::array();
  for (int i = 0; i < n; ++i)
    basis.push_back({{"label", m.basis.labels[i]},
                     {"degree", m.basis.gradings[i].coh_degree},
                     {"hodge_weight", to_string(m.basis.gradings[i].hodge_weight)}});
  j["basis"] = basis;
  j["dim_x"] = m.dim_x;
  j["unit"] = m.basis.labels[m.unit];
  json prod = json::array();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (auto& [c, v] : m.product[a][b].coords)
        prod.push_back({m.basis.labels[a], m.basis.labels[b], m.basis.labels[c], to_string(v)});
  j["product"] = prod;
  for (auto [key, M] : {std::pair{"d_bar", &m.d_bar}, std::pair{"del", &m.del}}) {
    json arr = json::array();
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < n; ++r)
        if ((*M)(r, c) != 0) arr.push_back({m.basis.labels[c], m.basis.labels[r], to_string((*M)(r, c))});
    j[key] = arr;
  }
  json tr = json::array();
  for (int i = 0; i < n; ++i)
    if (m.trace[i] != 0) tr.push_back({m.basis.labels[i], to_string(m.trace[i])});
  j["trace"] = tr;
  json mt = json::array();
  for (int i = 0; i < n; ++i) mt.push_back({m.basis.labels[i], to_string(m.metric[i])});
  j["metric"] = mt;
  if (!m.modes.empty()) {
    json md = json::array();
    for (int i = 0; i < n; ++i) md.push_back({m.basis.labels[i], m.modes[i]});
    j["modes"] = md;
    j["mode_window"] = m.mode_window;
  }
  return j.dump(2) + "\n";
}

std::string model_hash(const DGBVModel& m) {
  // FNV-1a over the canonical JSON form
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : model_to_json(m)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

DGBVModel resolve_model(const std::string& s) {
  if (s == "elliptic-cohomology") return builtin_elliptic_cohomology();
  if (s == "fourier-torus") return builtin_fourier_torus(1);
  if (s.rfind("fourier-torus:", 0) == 0) {
    int M = 0;
    try {
      M = std::stoi(s.substr(14));
    } catch (...) {
      throw ModelError("model", "bad fourier-torus size in '" + s + "'");
    }
    if (M < 1) throw ModelError("model", "fourier-torus needs M >= 1");
    return builtin_fourier_torus(M);
  }
  std::ifstream in(s);
  if (!in) throw ModelError("model", "no builtin or readable file named '" + s + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_model(ss.str());
}

Matrix metric_adjoint(const DGBVModel& m, const Matrix& M) {
  const int n = m.dim();
  Matrix A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (M(j, i) != 0) A(i, j) = M(j, i) * m.metric[j] / m.metric[i];
  return A;
}

const Matrix& HodgeData::projector(const Q& lambda) const {
  for (auto& p : spectrum)
    if (p.value == lambda) return p.projector;
  throw std::out_of_range("no eigenvalue " + to_string(lambda));
}

HodgeData hodge_data(const DGBVModel& m) {
  HodgeData h;
  h.d_bar_adjoint = metric_adjoint(m, m.d_bar);
  h.laplacian = m.d_bar * h.d_bar_adjoint + h.d_bar_adjoint * m.d_bar;
  h.spectrum = rational_eigendecomposition(h.laplacian);
  h.harmonic_rank = 0;
  for (auto& p : h.spectrum)
    if (p.value == 0) h.harmonic_rank = rank(p.projector);
  h.cohomology_rank = m.dim() - 2 * rank(m.d_bar);
  return h;
}

}  // namespace bcov
