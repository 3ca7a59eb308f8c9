#include "crof/assembly.hpp"

#include <cmath>
#include <vector>

namespace crof {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

}  // namespace

LocalForm local_dirichlet(const TriMesh& mesh, const GeometryCache& geom, int face) {
  LocalForm L = LocalForm::Zero();
  const double A = geom.double_areas[face];
  for (int c = 0; c < 3; ++c) {
    L(2 * c, 2 * c) = 2.0 / A;
    L(2 * c + 1, 2 * c + 1) = 2.0 / A;
  }
  // Edge e = slot c leaves corner c, edge f = slot c+2 enters it.
  for (int c = 0; c < 3; ++c) {
    const int e = c;
    const int f = (c + 2) % 3;
    const double theta = geom.angles(face, c);
    const double cos_t = std::cos(theta);
    const double sign = mesh.face_edge_sign(face, e) * mesh.face_edge_sign(face, f);
    const double same = sign * (2.0 / A) * cos_t * cos_t;
    const double cross =
        sign * 2.0 * cos_t / (geom.length(mesh, face, e) * geom.length(mesh, face, f));
    L(2 * e, 2 * f) = L(2 * f, 2 * e) = same;
    L(2 * e + 1, 2 * f + 1) = L(2 * f + 1, 2 * e + 1) = same;
    L(2 * e + 1, 2 * f) = L(2 * f, 2 * e + 1) = cross;
    L(2 * e, 2 * f + 1) = L(2 * f + 1, 2 * e) = -cross;
  }
  return L;
}

LocalForm local_mass(const TriMesh& mesh, const GeometryCache& geom, int face) {
  LocalForm M = LocalForm::Zero();
  const double A = geom.double_areas[face];
  for (int c = 0; c < 3; ++c) {
    const double l = geom.length(mesh, face, c);
    M(2 * c, 2 * c) = M(2 * c + 1, 2 * c + 1) = A / (6.0 * l * l);
  }
  return M;
}

LocalDifferential local_differential(const TriMesh& mesh, const GeometryCache& geom, int face) {
  LocalDifferential D = LocalDifferential::Zero();
  const double A = geom.double_areas[face];
  for (int c = 0; c < 3; ++c) {
    // Slot c: tail i = corner c, tip j = corner c+1, opposite k = corner c+2.
    const int i = c, j = (c + 1) % 3, k = (c + 2) % 3;
    const double l_ij = geom.length(mesh, face, c);
    const double l_jk = geom.length(mesh, face, j);
    const double l_ki = geom.length(mesh, face, k);
    const double sign = mesh.face_edge_sign(face, c);
    const double tangential = A / (6.0 * l_ij * l_ij);
    D(2 * c, i) = -sign * tangential;
    D(2 * c, j) = sign * tangential;
    D(2 * c + 1, i) = -sign * l_jk / (6.0 * l_ij) * std::cos(geom.angles(face, j));
    D(2 * c + 1, j) = -sign * l_ki / (6.0 * l_ij) * std::cos(geom.angles(face, i));
    D(2 * c + 1, k) = sign / 6.0;
  }
  return D;
}

SparseMatrix scatter_forms(const TriMesh& mesh, const CrofDofMap& dofs,
                           const std::vector<LocalForm>& blocks) {
  Triplets trips;
  trips.reserve(blocks.size() * 36);
  for (int f = 0; f < mesh.face_count(); ++f) {
    const LocalForm& block = blocks[static_cast<std::size_t>(f)];
    for (int a = 0; a < 6; ++a) {
      const int ga = 2 * mesh.face_edge(f, a / 2) + a % 2;
      for (int b = 0; b < 6; ++b) {
        if (block(a, b) == 0.0) continue;
        const int gb = 2 * mesh.face_edge(f, b / 2) + b % 2;
        trips.emplace_back(ga, gb, block(a, b));
      }
    }
  }
  SparseMatrix A(dofs.size(), dofs.size());
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}

SparseMatrix assemble_L(const TriMesh& mesh, const GeometryCache& geom, const CrofDofMap& dofs) {
  std::vector<LocalForm> blocks(static_cast<std::size_t>(mesh.face_count()));
  for (int f = 0; f < mesh.face_count(); ++f) blocks[static_cast<std::size_t>(f)] = local_dirichlet(mesh, geom, f);
  return scatter_forms(mesh, dofs, blocks);
}

SparseMatrix assemble_M(const TriMesh& mesh, const GeometryCache& geom, const CrofDofMap& dofs) {
  std::vector<LocalForm> blocks(static_cast<std::size_t>(mesh.face_count()));
  for (int f = 0; f < mesh.face_count(); ++f) blocks[static_cast<std::size_t>(f)] = local_mass(mesh, geom, f);
  return scatter_forms(mesh, dofs, blocks);
}

SparseMatrix assemble_D(const TriMesh& mesh, const GeometryCache& geom, const CrofDofMap& dofs) {
  Triplets trips;
  trips.reserve(static_cast<std::size_t>(mesh.face_count()) * 15);
  for (int f = 0; f < mesh.face_count(); ++f) {
    const LocalDifferential block = local_differential(mesh, geom, f);
    for (int a = 0; a < 6; ++a) {
      const int row = 2 * mesh.face_edge(f, a / 2) + a % 2;
      for (int c = 0; c < 3; ++c)
        if (block(a, c) != 0.0) trips.emplace_back(row, mesh.faces()(f, c), block(a, c));
    }
  }
  SparseMatrix D(dofs.size(), mesh.vertex_count());
  D.setFromTriplets(trips.begin(), trips.end());
  return D;
}

SparseMatrix assemble_B(const TriMesh& mesh, const GeometryCache& geom) {
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(mesh.vertex_count());
  for (int f = 0; f < mesh.face_count(); ++f)
    for (int c = 0; c < 3; ++c) mass[mesh.faces()(f, c)] += geom.double_areas[f] / 6.0;
  SparseMatrix B(mesh.vertex_count(), mesh.vertex_count());
  B.reserve(Eigen::VectorXi::Ones(mesh.vertex_count()));
  for (int v = 0; v < mesh.vertex_count(); ++v) B.insert(v, v) = mass[v];
  B.makeCompressed();
  return B;
}

SparseMatrix assemble_cotan(const TriMesh& mesh, const GeometryCache& geom) {
  Triplets trips;
  trips.reserve(static_cast<std::size_t>(mesh.face_count()) * 12);
  for (int f = 0; f < mesh.face_count(); ++f) {
    for (int c = 0; c < 3; ++c) {
      // Slot c joins corners c and c+1 and is opposite corner c+2.
      const int a = mesh.faces()(f, c);
      const int b = mesh.faces()(f, (c + 1) % 3);
      const double w = 0.5 / std::tan(geom.angles(f, (c + 2) % 3));
      trips.emplace_back(a, b, -w);
      trips.emplace_back(b, a, -w);
      trips.emplace_back(a, a, w);
      trips.emplace_back(b, b, w);
    }
  }
  SparseMatrix L(mesh.vertex_count(), mesh.vertex_count());
  L.setFromTriplets(trips.begin(), trips.end());
  return L;
}

}  // namespace crof
