#pragma once

#include "bcov/functional.hpp"

namespace bcov {

// Flow e^{F'/hbar} = e^{hbar d_P} e^{F/hbar}, with propagator P + delta P_delta.
// Integrates dF/ds = hbar d_P F + 1/2 {F,F}_P component by component in
// (2g-2+n, g, delta-degree) order; each component is a polynomial in s.
// Components are produced for g <= G and n <= N + 2(G-g) (G, N from F.bounds),
// the set closed under the flow's dependencies.
Functional rg_flow(const Functional& F, const Kernel2& P, const Kernel2& P_delta = {});

// Sum over isomorphism classes of connected stable graphs with genus-labelled
// vertices (F components) and P edges, weighted by 1/|Aut|. Throws
// std::invalid_argument("oracle bound exceeded") beyond g_max = 2, n_max = 4.
struct OracleStats {
  int graphs = 0;
  int max_vertices = 0;
};
Functional rg_flow_graph_oracle(const Functional& F, const Kernel2& P, int g_max, int n_max,
                                OracleStats* stats = nullptr);

struct StableGraph {
  std::vector<int> genus;              // vertex genus labels, nondecreasing
  std::vector<std::vector<int>> mult;  // edge multiplicities; diagonal = self-loops
  int aut = 1;                         // vertex permutations fixing the graph
  Q weight;                            // 1/aut; edge symmetry lives in the operators
  int total_genus() const;
  int edges() const;
};
// Isomorphism classes of connected multigraphs that can carry a stable
// amplitude with genus <= g_max and at most n_max external legs.
std::vector<StableGraph> stable_graphs(int g_max, int n_max);

// Throws std::invalid_argument("unstable vertex (g,n)") if F has a component with 2g-2+n <= 0.
void require_stable(const Functional& F);

// sorts u in place and returns the Koszul sign (0 for a repeated odd variable)
int canonical_sort(Mono& u);

}  // namespace bcov
