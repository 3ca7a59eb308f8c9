#pragma once

#include "crof/mesh.hpp"

#include <Eigen/SparseCore>

namespace crof {

enum class BoundaryRule {
  Fixed,                // old boundary vertices keep their positions
  SmoothBoundaryCurve,  // cubic B-spline rule (1/8, 3/4, 1/8) along the boundary
};

struct Subdivision {
  TriMesh mesh;
  // Maps values on the coarse vertices to the fine vertices (fine = S * coarse).
  // Vertex positions of `mesh` are exactly S * coarse positions.
  Eigen::SparseMatrix<double> prolongation;
};

// One level of Loop subdivision. Old vertices keep their indices; the new
// vertex on edge e gets index coarse.vertex_count() + e.
Subdivision loop_subdivide(const TriMesh& coarse, BoundaryRule rule);

}  // namespace crof
