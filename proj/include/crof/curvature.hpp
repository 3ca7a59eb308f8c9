#pragma once

#include "crof/assembly.hpp"
#include "crof/mesh.hpp"

namespace crof {

// Integrated Gaussian curvature per vertex. Boundary vertices carry zero
// defect (the most developable extension of the surface), not the geodesic
// curvature pi - angle sum.
struct AngleDefects {
  Eigen::VectorXd defects;     // kappa_v = 2 pi - angle sum, 0 on the boundary
  Eigen::VectorXd angle_sums;  // s_v over all incident faces

  double total() const { return defects.sum(); }
};

AngleDefects angle_defects(const TriMesh& mesh, const GeometryCache& geom);

// Curvature block for one face, with the vertex defects distributed to the
// face in proportion to its tip angle.
LocalForm local_curvature(const TriMesh& mesh, const GeometryCache& geom,
                          const AngleDefects& defects, int face);

// m x m curvature correction matrix.
SparseMatrix assemble_K(const TriMesh& mesh, const GeometryCache& geom, const AngleDefects& defects,
                        const CrofDofMap& dofs);

}  // namespace crof
