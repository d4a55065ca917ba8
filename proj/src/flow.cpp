#include "bcov/flow.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

namespace bcov {

int canonical_sort(Mono& u) {
  // insertion sort counting odd-odd inversions
  int s = 1;
  for (std::size_t i = 1; i < u.size(); ++i) {
    Var x = u[i];
    std::size_t j = i;
    while (j > 0 && u[j - 1] > x) {
      if (var_parity(x) && var_parity(u[j - 1])) s = -s;
      u[j] = u[j - 1];
      --j;
    }
    u[j] = x;
  }
  for (std::size_t i = 1; i < u.size(); ++i)
    if (u[i] == u[i - 1] && var_parity(u[i])) return 0;
  return s;
}

void require_stable(const Functional& F) {
  for (auto& [g, p] : F.by_genus)
    for (auto& [u, c] : p.terms) {
      int n = arity(u);
      bool delta = has_delta(u);
      int chi = 2 * g - 2 + n;
      if (g < 0 || chi < 0 || (!delta && chi == 0))
        throw std::invalid_argument("unstable vertex (" + std::to_string(g) + "," + std::to_string(n) + ")");
    }
}

namespace {

using Series = std::vector<Poly>;  // coefficients of s^j

void series_add(Series& a, const Series& b, const Q& scale = 1) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t j = 0; j < b.size(); ++j)
    if (!b[j].is_zero()) a[j] += scale == 1 ? b[j] : b[j].scaled(scale);
}

}  // namespace

Functional rg_flow(const Functional& F, const Kernel2& P, const Kernel2& P_delta) {
  require_stable(F);
  const int G = F.bounds.G, N = F.bounds.N;
  using Key = std::tuple<int, int, int>;  // g, n, e
  std::map<Key, Series> comp;
  bool any_delta = !P_delta.is_zero();
  for (auto& [g, p] : F.by_genus)
    for (auto& [u, c] : p.terms) {
      if (g > G || arity(u) > N + 2 * (G - g)) continue;
      Key k{g, arity(u), has_delta(u) ? 1 : 0};
      if (std::get<2>(k)) any_delta = true;
      auto& s = comp[k];
      if (s.empty()) s.resize(1);
      s[0].add(u, c);
    }
  if (P.is_zero() && P_delta.is_zero()) {
    Functional r = F;
    return r;
  }
  std::vector<Key> order;
  for (int g = 0; g <= G; ++g)
    for (int n = 0; n <= N + 2 * (G - g); ++n)
      for (int e = 0; e <= (any_delta ? 1 : 0); ++e) {
        int chi = 2 * g - 2 + n;
        if (chi < 0 || (e == 0 && chi == 0)) continue;
        order.emplace_back(g, n, e);
      }
  std::sort(order.begin(), order.end(), [](const Key& a, const Key& b) {
    auto [ga, na, ea] = a;
    auto [gb, nb, eb] = b;
    return std::make_tuple(2 * ga - 2 + na, ga, ea, na) < std::make_tuple(2 * gb - 2 + nb, gb, eb, nb);
  });
  auto lookup = [&](int g, int n, int e) -> const Series* {
    auto it = comp.find({g, n, e});
    return it == comp.end() ? nullptr : &it->second;
  };
  const Q half(1, 2);
  for (auto& key : order) {
    auto [g, n, e] = key;
    Series rhs;
    if (g >= 1) {
      if (auto* s = lookup(g - 1, n + 2, e)) {
        Series t;
        for (auto& c : *s) t.push_back(contract(P, c));
        series_add(rhs, t);
      }
      if (e == 1 && !P_delta.is_zero())
        if (auto* s = lookup(g - 1, n + 2, 0)) {
          Series t;
          for (auto& c : *s) t.push_back(times_delta(contract(P_delta, c)));
          series_add(rhs, t);
        }
    }
    for (auto& [k1, s1] : comp) {
      auto [g1, n1, e1] = k1;
      int g2 = g - g1, n2 = n + 2 - n1, e2 = e - e1;
      if (g2 < 0 || n2 < 0 || e2 < 0) continue;
      if (k1 == key) continue;
      auto* s2 = lookup(g2, n2, e2);
      if (!s2 || s2 == &comp[key]) continue;
      Series t(s1.size() + s2->size() - 1);
      for (std::size_t a = 0; a < s1.size(); ++a)
        for (std::size_t b = 0; b < s2->size(); ++b) t[a + b] += bracket(P, s1[a], (*s2)[b]);
      series_add(rhs, t, half);
      if (e == 1 && e1 == 0 && e2 == 0 && !P_delta.is_zero()) {
        Series u(s1.size() + s2->size() - 1);
        for (std::size_t a = 0; a < s1.size(); ++a)
          for (std::size_t b = 0; b < s2->size(); ++b) u[a + b] += times_delta(bracket(P_delta, s1[a], (*s2)[b]));
        series_add(rhs, u, half);
      }
    }
    // a component never feeds itself: brackets need two stable pieces of smaller
    // Euler characteristic, or a delta piece paired with a delta-free one
    bool nonzero = false;
    for (auto& c : rhs) nonzero = nonzero || !c.is_zero();
    if (!nonzero) continue;
    Series& out = comp[key];
    if (out.empty()) out.resize(1);
    out.resize(std::max(out.size(), rhs.size() + 1));
    for (std::size_t j = 0; j < rhs.size(); ++j) out[j + 1] += rhs[j].scaled(Q(1, long(j + 1)));
  }
  Functional r;
  r.bounds = F.bounds;
  for (auto& [k, s] : comp) {
    Poly& p = r.at(std::get<0>(k));
    for (auto& c : s) p += c;
  }
  r.prune();
  return r;
}

int StableGraph::total_genus() const {
  return std::accumulate(genus.begin(), genus.end(), 0) + edges() - int(genus.size()) + 1;
}

int StableGraph::edges() const {
  int e = 0;
  for (std::size_t i = 0; i < mult.size(); ++i)
    for (std::size_t j = i; j < mult.size(); ++j) e += mult[i][j];
  return e;
}

namespace {

int min_valence(int g) { return g == 0 ? 3 : (g == 1 ? 1 : 0); }

bool connected(const std::vector<std::vector<int>>& m) {
  int V = int(m.size());
  std::vector<int> seen(V, 0), stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w = 0; w < V; ++w)
      if (!seen[w] && m[v][w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
  }
  return std::all_of(seen.begin(), seen.end(), [](int s) { return s; });
}

struct Enumerator {
  int g_max, n_max;
  std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
  std::vector<StableGraph> out;

  void consider(const std::vector<int>& genus, const std::vector<std::vector<int>>& m) {
    const int V = int(genus.size());
    int E = 0;
    std::vector<int> deg(V, 0);
    for (int i = 0; i < V; ++i)
      for (int j = i; j < V; ++j) {
        E += m[i][j];
        deg[i] += (i == j ? 2 : 1) * m[i][j];
        if (i != j) deg[j] += m[i][j];
      }
    int nmin = -2 * E;
    for (int v = 0; v < V; ++v) nmin += std::max(deg[v], min_valence(genus[v]));
    if (nmin > n_max || !connected(m)) return;
    std::vector<int> perm(V);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best;
    int aut = 0;
    auto flat = [&](const std::vector<int>& p) {
      std::vector<int> f;
      for (int i = 0; i < V; ++i)
        for (int j = i; j < V; ++j) f.push_back(m[p[i]][p[j]]);
      return f;
    };
    std::vector<int> self = flat(perm);
    do {
      bool ok = true;
      for (int i = 0; i < V && ok; ++i) ok = genus[perm[i]] == genus[i];
      if (!ok) continue;
      auto f = flat(perm);
      if (f == self) ++aut;
      if (best.empty() || f < best) best = f;
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (!seen.insert({genus, best}).second) return;
    StableGraph sg;
    sg.genus = genus;
    sg.mult = m;
    sg.aut = aut;
    sg.weight = Q(1, aut);
    out.push_back(std::move(sg));
  }

  void slots(const std::vector<int>& genus, std::vector<std::vector<int>>& m, int slot, int left) {
    const int V = int(genus.size());
    int total = V * (V + 1) / 2;
    if (slot == total) {
      consider(genus, m);
      return;
    }
    int i = 0, j = 0, s = slot;
    for (i = 0; i < V; ++i) {
      if (s < V - i) {
        j = i + s;
        break;
      }
      s -= V - i;
    }
    for (int c = 0; c <= left; ++c) {
      m[i][j] = m[j][i] = c;
      slots(genus, m, slot + 1, left - c);
    }
    m[i][j] = m[j][i] = 0;
  }

  void labels(std::vector<int>& genus, int V) {
    if (int(genus.size()) == V) {
      int gs = std::accumulate(genus.begin(), genus.end(), 0);
      int emax = g_max - gs + V - 1;
      if (emax < V - 1) return;
      std::vector<std::vector<int>> m(V, std::vector<int>(V, 0));
      slots(genus, m, 0, emax);
      return;
    }
    for (int g = genus.empty() ? 0 : genus.back(); g <= g_max; ++g) {
      genus.push_back(g);
      labels(genus, V);
      genus.pop_back();
    }
  }
};

// apply sum_ij P^ij d^cu_i d^cv_j
Poly edge_op(const Kernel2& P, const Poly& S, int cu, int cv) {
  Poly r;
  Mono w1, w2;
  for (auto& [u, c] : S.terms) {
    for (std::size_t a = 0; a < u.size(); ++a) {
      if (var_copy(u[a]) != cu || (a > 0 && u[a] == u[a - 1])) continue;
      for (std::size_t b = 0; b < u.size(); ++b) {
        if (var_copy(u[b]) != cv || (b > 0 && u[b] == u[b - 1])) continue;
        Q k = P.at(strip_copy(u[a]), strip_copy(u[b]));
        if (k == 0) continue;
        long s1 = mono_deriv(u[b], u, w1);
        long s2 = mono_deriv(u[a], w1, w2);
        r.add(w2, k * c * (s1 * s2));
      }
    }
  }
  return r;
}

Poly recopy(const Poly& p, int from, int to) {
  Poly r;
  for (auto& [u, c] : p.terms) {
    Mono w = u;
    for (Var& v : w)
      if (var_copy(v) == from) v = with_copy(v, to);
    int s = canonical_sort(w);
    if (s) r.add(w, s > 0 ? c : Q(-c));
  }
  return r;
}

Poly arity_window(const Poly& p, int lo, int hi) {
  Poly r;
  for (auto& [u, c] : p.terms)
    if (int(u.size()) >= lo && int(u.size()) <= hi) r.terms.emplace_hint(r.terms.end(), u, c);
  return r;
}

}  // namespace

std::vector<StableGraph> stable_graphs(int g_max, int n_max) {
  if (g_max > 2 || n_max > 4 || g_max < 0 || n_max < 0) throw std::invalid_argument("oracle bound exceeded");
  Enumerator en{g_max, n_max, {}, {}};
  for (int V = 1; V <= std::max(1, 2 * g_max - 2 + n_max); ++V) {
    std::vector<int> genus;
    en.labels(genus, V);
  }
  return en.out;
}

Functional rg_flow_graph_oracle(const Functional& F, const Kernel2& P, int g_max, int n_max, OracleStats* stats) {
  require_stable(F);
  auto graphs = stable_graphs(g_max, n_max);
  Functional r;
  r.bounds = F.bounds;
  if (stats) *stats = {};
  std::set<Var> active;
  for (auto& [ij, c] : P.upper) {
    active.insert(ij.first);
    active.insert(ij.second);
  }
  for (auto& gr : graphs) {
    const int V = int(gr.genus.size());
    std::vector<int> deg(V, 0);
    for (int i = 0; i < V; ++i)
      for (int j = 0; j < V; ++j) deg[i] += (i == j ? 2 : 1) * gr.mult[i][j];
    Poly S = Poly::constant(1);
    std::vector<int> finished(V, 0);
    bool dead = false;
    for (int v = 0; v < V && !dead; ++v) {
      int slack = n_max;
      for (int w = 0; w < V; ++w)
        if (w != v) slack -= std::max(0, min_valence(gr.genus[w]) - deg[w]);
      Poly Pv = arity_window(F.get(gr.genus[v]), std::max(deg[v], min_valence(gr.genus[v])), deg[v] + slack);
      if (deg[v] > 0) {
        // need deg[v] legs the propagator can see
        Poly live;
        for (auto& [mono, c] : Pv.terms) {
          int a = 0;
          for (Var x : mono) a += active.count(x);
          if (a >= deg[v]) live.terms.emplace_hint(live.terms.end(), mono, c);
        }
        Pv = std::move(live);
      }
      for (int l = 0; l < gr.mult[v][v]; ++l) Pv = contract(P, Pv).scaled(Q(1, l + 1));
      S = S * recopy(Pv, 0, v + 1);
      for (int u = 0; u < v; ++u)
        for (int l = 0; l < gr.mult[u][v]; ++l) S = edge_op(P, S, u + 1, v + 1).scaled(Q(1, l + 1));
      for (int u = 0; u <= v; ++u) {
        if (finished[u]) continue;
        bool done = true;
        for (int w = v + 1; w < V; ++w) done = done && gr.mult[u][w] == 0;
        if (done) {
          S = recopy(S, u + 1, 0);
          finished[u] = 1;
        }
      }
      // drop terms that can no longer end with <= n_max external legs
      std::vector<int> pending(V, 0);
      for (int u = 0; u <= v; ++u)
        for (int w = v + 1; w < V; ++w) pending[u] += gr.mult[u][w];
      Poly kept;
      for (auto& [mono, c] : S.terms) {
        std::vector<int> cnt(V + 1, 0);
        for (Var x : mono) ++cnt[var_copy(x)];
        int ext = cnt[0];
        bool ok = true;
        for (int u = 0; u <= v && ok; ++u) {
          if (finished[u]) continue;
          if (cnt[u + 1] < pending[u]) ok = false;
          ext += cnt[u + 1] - pending[u];
        }
        if (ok && ext <= n_max) kept.terms.emplace_hint(kept.terms.end(), mono, c);
      }
      S = std::move(kept);
      dead = S.is_zero();
    }
    if (dead) continue;
    r.at(gr.total_genus()) += S.scaled(gr.weight);
    if (stats) {
      ++stats->graphs;
      stats->max_vertices = std::max(stats->max_vertices, V);
    }
  }
  r.prune();
  return r.truncated(g_max, n_max);
}

}  // namespace bcov
