#pragma once

#include "crof/assembly.hpp"
#include "crof/curvature.hpp"
#include "crof/mesh.hpp"

#include <memory>
#include <optional>
#include <string_view>

namespace crof {

enum class EnergyKind { CurvedHessian, SquaredLaplacian };

std::string_view to_string(EnergyKind kind);
// Accepts "curved-hessian" / "squared-laplacian" (underscores also accepted).
EnergyKind parse_energy_kind(std::string_view text);

// Matrices the quadratic form was composed from, kept for diagnostics and
// export. The one-form matrices are empty for the squared Laplacian; the
// cotan Laplacian is empty for the curved Hessian.
struct EnergyComponents {
  SparseMatrix L, M, D, K;
  SparseMatrix cotan;
  AngleDefects defects;
};

// Discrete smoothness energy E(u) = 1/2 u^T Q u on the vertices of a mesh,
// with the lumped vertex mass B for L2 terms.
class EnergyOperator {
 public:
  EnergyOperator(EnergyKind kind, std::shared_ptr<const TriMesh> mesh, SparseMatrix Q, SparseMatrix B,
                 EnergyComponents components);

  EnergyKind kind() const { return kind_; }
  const TriMesh& mesh() const { return *mesh_; }
  const SparseMatrix& Q() const { return Q_; }
  const SparseMatrix& B() const { return B_; }
  const EnergyComponents& components() const { return components_; }
  int size() const { return static_cast<int>(Q_.rows()); }

  // max |Q_ij| / max B_ii, the natural eigenvalue scale of (Q, B).
  double scale() const;

 private:
  EnergyKind kind_;
  std::shared_ptr<const TriMesh> mesh_;
  SparseMatrix Q_;
  SparseMatrix B_;
  EnergyComponents components_;
};

// Q = D^T M^-1 (L + K) M^-1 D. `include_curvature = false` drops K (only
// meaningful for diagnostics). `geom` overrides the embedded geometry, e.g.
// for intrinsically specified meshes.
EnergyOperator build_curved_hessian(const TriMesh& mesh, bool include_curvature = true);
EnergyOperator build_curved_hessian(const TriMesh& mesh, const GeometryCache& geom,
                                    bool include_curvature = true);

// Q = Lc^T B^-1 Lc with the cotan Laplacian Lc (zero Neumann boundary).
EnergyOperator build_squared_laplacian(const TriMesh& mesh);
EnergyOperator build_squared_laplacian(const TriMesh& mesh, const GeometryCache& geom);

EnergyOperator build_energy(const TriMesh& mesh, EnergyKind kind);

// 1/2 u^T Q u. Throws DimensionMismatch.
double energy_value(const EnergyOperator& op, const Eigen::VectorXd& u);

double max_abs(const SparseMatrix& A);
// max |A - A^T|.
double symmetry_residual(const SparseMatrix& A);

}  // namespace crof
