#pragma once

#include "crof/energy.hpp"
#include "crof/quadrature.hpp"
#include "crof/solvers.hpp"
#include "crof/subdivision.hpp"
#include "crof/surface.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace crof {

// Parameter-domain triangulation (x, y) used for reference integrals.
struct ParamMesh {
  Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor> points;
  Triangles faces;
};

// nx by ny structured triangulation of [x0,x1] x [y0,y1].
ParamMesh param_grid(int nx, int ny, double x0, double x1, double y0, double y1);

// Pointwise integrand of the smooth energy on the Monge patch z(x,y):
// (∇df):(∇df) + K |df|^2, evaluated with the first fundamental form and the
// Christoffel symbols of the graph. Does not include the area element.
double monge_energy_density(const SmoothSurface& surface, const Polynomial2& f, double x, double y);

// 1/2 ∫ ((∇df):(∇df) + K |df|^2) dA over the parameter triangulation,
// integrating against the area element sqrt(1 + z_x^2 + z_y^2).
double smooth_energy_monge(const SmoothSurface& surface, const Polynomial2& f, const ParamMesh& domain,
                           const TriangleRule& rule);

enum class RefinementStrategy {
  Loop,         // Loop subdivision, then projection onto the surface
  RandomSplit,  // every face split 1-to-3 at a random interior point
};

std::string_view to_string(RefinementStrategy strategy);

// Splits every face at a random point (barycentric weights drawn away from
// the edges); no regularity guarantee.
Subdivision random_split(const TriMesh& coarse, std::uint64_t seed);

struct ConvergenceLevel {
  int level = 0;
  int vertices = 0;
  double h = 0.0;
  double error = 0.0;
};

struct ConvergenceRecord {
  std::string problem;
  std::string error_kind;
  std::string strategy;
  std::vector<ConvergenceLevel> levels;
  double slope = 0.0;
  // Problem-specific reference value (exact energy, analytic eigenvalue).
  double reference = 0.0;
  // |degree-4 - degree-7| / |reference| for quadrature references.
  double reference_agreement = 0.0;

  bool monotone_decreasing() const;
};

// Least-squares slope of log(error) against log(h).
double fit_loglog_slope(const std::vector<ConvergenceLevel>& levels);

void save_convergence_csv(const ConvergenceRecord& record, const std::string& path);

struct ForwardProblem {
  SmoothSurface surface = SmoothSurface::monge(Polynomial2::parse("x^2"));
  Polynomial2 f = Polynomial2::parse("x^2");
  double x0 = -1.0, x1 = 1.0, y0 = -1.0, y1 = 1.0;
  int base_cells = 4;      // coarse grid resolution per side
  int levels = 4;          // number of meshes in the study
  int reference_cells = 256;
  EnergyKind energy = EnergyKind::CurvedHessian;
};

// |E_h(f) - E(f)| / |E(f)| on Loop-refined, projected Monge-patch meshes.
ConvergenceRecord forward_energy_study(const ForwardProblem& problem);

struct SphereEigenProblem {
  int first_level = 2;
  int last_level = 5;
  EnergyKind energy = EnergyKind::CurvedHessian;
};

// Relative error of eigenvalues 2..4 of (Q, B) on inscribed icospheres
// against the biharmonic value 4 of the unit sphere (max over the three).
ConvergenceRecord sphere_eigenvalue_study(const SphereEigenProblem& problem);

struct SelfConvergenceProblem {
  TriMesh base;
  Constraints constraints;  // vertex indices of the base mesh
  int levels = 4;           // refinements; the last one is the reference
  BoundaryRule boundary = BoundaryRule::Fixed;
  RefinementStrategy strategy = RefinementStrategy::Loop;
  std::optional<SmoothSurface> surface{};  // projection after each refinement
  EnergyKind energy = EnergyKind::CurvedHessian;
  std::uint64_t seed = 1;
};

// Interpolation problem solved on every level; L2 error (lumped mass of the
// finest mesh) between the prolongated coarse solution and the finest one.
ConvergenceRecord self_convergence_study(const SelfConvergenceProblem& problem);

}  // namespace crof
