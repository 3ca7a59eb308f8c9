#pragma once

#include "crof/mesh.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace crof {

using SparseMatrix = Eigen::SparseMatrix<double>;

// Two Crouzeix-Raviart one-form DOFs per edge: the parallel form at 2e and
// the perpendicular form at 2e + 1. Both are oriented by the global edge
// direction; the perpendicular direction is the edge vector rotated a
// quarter turn counterclockwise.
class CrofDofMap {
 public:
  explicit CrofDofMap(const TriMesh& mesh) : edges_(mesh.edge_count()) {}
  static constexpr int parallel(int edge) { return 2 * edge; }
  static constexpr int perpendicular(int edge) { return 2 * edge + 1; }
  int size() const { return 2 * edges_; }

 private:
  int edges_;
};

// Per-face element matrices. Local DOF 2c is the parallel form of slot c,
// 2c + 1 its perpendicular form; local vertex c is corner c. Signs for
// locally reversed edges are already applied.
using LocalForm = Eigen::Matrix<double, 6, 6>;
using LocalDifferential = Eigen::Matrix<double, 6, 3>;

LocalForm local_dirichlet(const TriMesh& mesh, const GeometryCache& geom, int face);
LocalForm local_mass(const TriMesh& mesh, const GeometryCache& geom, int face);
LocalDifferential local_differential(const TriMesh& mesh, const GeometryCache& geom, int face);

// m x m covariant one-form Dirichlet matrix.
SparseMatrix assemble_L(const TriMesh& mesh, const GeometryCache& geom, const CrofDofMap& dofs);
// m x m diagonal one-form mass matrix.
SparseMatrix assemble_M(const TriMesh& mesh, const GeometryCache& geom, const CrofDofMap& dofs);
// m x n differential: row = one-form DOF, column = vertex.
SparseMatrix assemble_D(const TriMesh& mesh, const GeometryCache& geom, const CrofDofMap& dofs);
// n x n lumped (barycentric) vertex mass.
SparseMatrix assemble_B(const TriMesh& mesh, const GeometryCache& geom);
// n x n positive semi-definite cotangent Laplacian.
SparseMatrix assemble_cotan(const TriMesh& mesh, const GeometryCache& geom);

// Scatters per-face 6x6 blocks into an m x m matrix. Exposed for the
// curvature matrix, which shares the DOF layout.
SparseMatrix scatter_forms(const TriMesh& mesh, const CrofDofMap& dofs,
                           const std::vector<LocalForm>& blocks);

}  // namespace crof
