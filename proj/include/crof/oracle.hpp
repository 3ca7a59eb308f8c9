#pragma once

#include "crof/assembly.hpp"
#include "crof/curvature.hpp"
#include "crof/quadrature.hpp"

namespace crof {

struct OracleMatrices {
  SparseMatrix L, M, D, K;
};

// Reference one-form matrices of a planar mesh (all z = 0, faces
// counterclockwise in the xy plane) obtained by numerically integrating the
// defining integrals
//   L_ab = ∫ ∇η_a : ∇η_b,  M_ab = ∫ η_a · η_b,  D_av = ∫ η_a · dφ_v
// with explicitly constructed basis forms η = ω b: b is the piecewise linear
// Crouzeix-Raviart function of the edge and ω the constant covector pairing
// to one with the global edge vector (parallel) or with its quarter-turn
// rotation (perpendicular). K is left empty (it vanishes on planar meshes).
OracleMatrices quadrature_oracle_planar(const TriMesh& mesh, const TriangleRule& rule);

// Curvature matrix from the point-mass definition ∫ κ η_a · η_b =
// sum_v κ_v sum_f (θ_v^f / s_v) η_a|_f(v) · η_b|_f(v), evaluated with an
// explicit 2D layout of every face.
SparseMatrix curvature_oracle(const TriMesh& mesh, const GeometryCache& geom, const AngleDefects& defects);

struct MatrixComparison {
  double max_abs_error = 0.0;
  double max_relative_error = 0.0;  // per entry, against max(|a|, |b|, floor)
};

// Entrywise comparison; `floor` (relative to the larger max-abs of the two
// matrices) keeps exact zeros from dividing by roundoff.
MatrixComparison compare_matrices(const SparseMatrix& a, const SparseMatrix& b, double floor = 1e-6);

}  // namespace crof
