#include "crof/curvature.hpp"

#include <cmath>
#include <numbers>

namespace crof {

namespace {

// Angle sums of planar vertices carry a few ulps of rounding; anything below
// this is treated as exactly flat so flat meshes get an exactly zero K.
constexpr double kFlatDefect = 1e-12;

}  // namespace

AngleDefects angle_defects(const TriMesh& mesh, const GeometryCache& geom) {
  AngleDefects out;
  out.angle_sums = geom.angle_sums;
  out.defects.resize(mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    const double defect = 2.0 * std::numbers::pi - geom.angle_sums[v];
    out.defects[v] = mesh.is_boundary_vertex(v) || std::abs(defect) < kFlatDefect ? 0.0 : defect;
  }
  return out;
}

LocalForm local_curvature(const TriMesh& mesh, const GeometryCache& geom,
                          const AngleDefects& defects, int face) {
  LocalForm K = LocalForm::Zero();
  double weighted[3];
  for (int c = 0; c < 3; ++c) {
    const int v = mesh.faces()(face, c);
    const double kappa = defects.defects[v];
    weighted[c] = kappa == 0.0 ? 0.0 : geom.angles(face, c) / defects.angle_sums[v] * kappa;
  }
  if (weighted[0] == 0.0 && weighted[1] == 0.0 && weighted[2] == 0.0) return K;

  const double all = weighted[0] + weighted[1] + weighted[2];
  for (int c = 0; c < 3; ++c) {
    const double l = geom.length(mesh, face, c);
    K(2 * c, 2 * c) = K(2 * c + 1, 2 * c + 1) = all / (l * l);
  }
  for (int c = 0; c < 3; ++c) {
    const int e = c;
    const int f = (c + 2) % 3;
    const double theta = geom.angles(face, c);
    const double bracket = weighted[(c + 1) % 3] + weighted[(c + 2) % 3] - weighted[c];
    const double scale = mesh.face_edge_sign(face, e) * mesh.face_edge_sign(face, f) /
                         (geom.length(mesh, face, e) * geom.length(mesh, face, f)) * bracket;
    const double same = scale * std::cos(theta);
    const double cross = scale * std::sin(theta);
    K(2 * e, 2 * f) = K(2 * f, 2 * e) = same;
    K(2 * e + 1, 2 * f + 1) = K(2 * f + 1, 2 * e + 1) = same;
    K(2 * e + 1, 2 * f) = K(2 * f, 2 * e + 1) = cross;
    K(2 * e, 2 * f + 1) = K(2 * f + 1, 2 * e) = -cross;
  }
  return K;
}

SparseMatrix assemble_K(const TriMesh& mesh, const GeometryCache& geom, const AngleDefects& defects,
                        const CrofDofMap& dofs) {
  std::vector<LocalForm> blocks(static_cast<std::size_t>(mesh.face_count()));
  for (int f = 0; f < mesh.face_count(); ++f)
    blocks[static_cast<std::size_t>(f)] = local_curvature(mesh, geom, defects, f);
  return scatter_forms(mesh, dofs, blocks);
}

}  // namespace crof
