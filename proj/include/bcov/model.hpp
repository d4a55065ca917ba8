#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bcov/graded.hpp"
#include "bcov/report.hpp"

namespace bcov {

struct DGBVModel {
  std::string name;
  GradedBasis basis;
  int dim_x = 1;
  int unit = 0;
  std::vector<std::vector<GradedVector>> product;  // product[a][b] = e_a e_b
  Matrix d_bar;
  Matrix del;
  std::vector<Q> trace;
  std::vector<Q> metric;
  // Optional Fourier mode per basis element; products leaving |mode| <= mode_window
  // are truncated, so associativity is only tested inside the window.
  std::vector<int> modes;
  int mode_window = 0;

  int dim() const { return basis.size(); }
  int parity(int a) const { return basis.gradings[a].parity(); }
  int degree(int a) const { return basis.gradings[a].coh_degree; }
  const Q& weight(int a) const { return basis.gradings[a].hodge_weight; }

  GradedVector mul(const GradedVector& x, const GradedVector& y) const;
  Q tr(const GradedVector& x) const;
  Q pairing(int a, int b) const;
  Matrix pairing_matrix() const;
};

Report validate_dgbv(const DGBVModel& m);

GradedVector bv_bracket(const DGBVModel& m, const GradedVector& a, const GradedVector& b);

struct ModelError : std::runtime_error {
  std::string path;
  ModelError(std::string p, const std::string& what) : std::runtime_error(p + ": " + what), path(std::move(p)) {}
};

// Accepts JSON text. Throws ModelError on schema problems and on validation failure.
DGBVModel load_model(const std::string& json_text);
// Builtin name ("elliptic-cohomology", "fourier-torus", "fourier-torus:M") or path to a JSON file.
DGBVModel resolve_model(const std::string& name_or_path);
std::string model_to_json(const DGBVModel& m);
std::string model_hash(const DGBVModel& m);

DGBVModel builtin_elliptic_cohomology();
// eta_weight != 1 gives the alternative metric with weight eta_weight on eta-containing elements.
DGBVModel builtin_fourier_torus(int M, const Q& eta_weight = 1);

struct HodgeData {
  Matrix d_bar_adjoint;
  Matrix laplacian;
  std::vector<EigenPart> spectrum;
  int harmonic_rank = 0;
  int cohomology_rank = 0;

  const Matrix& projector(const Q& lambda) const;
};

HodgeData hodge_data(const DGBVModel& m);
Matrix metric_adjoint(const DGBVModel& m, const Matrix& M);

}  // namespace bcov
