#include "crof/subdivision.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace crof {

namespace {

// Loop's original vertex weight for valence n.
double loop_beta(int n) {
  const double c = 3.0 / 8.0 + 0.25 * std::cos(2.0 * std::numbers::pi / n);
  return (5.0 / 8.0 - c * c) / n;
}

}  // namespace

Subdivision loop_subdivide(const TriMesh& coarse, BoundaryRule rule) {
  const int nv = coarse.vertex_count();
  const int ne = coarse.edge_count();
  const int nf = coarse.face_count();
  const auto& E = coarse.edges();
  const auto& F = coarse.faces();
  const auto& EF = coarse.edge_faces();

  std::vector<std::vector<int>> neighbors(nv);
  std::vector<std::vector<int>> boundary_neighbors(nv);
  for (int e = 0; e < ne; ++e) {
    neighbors[E(e, 0)].push_back(E(e, 1));
    neighbors[E(e, 1)].push_back(E(e, 0));
    if (coarse.is_boundary_edge(e)) {
      boundary_neighbors[E(e, 0)].push_back(E(e, 1));
      boundary_neighbors[E(e, 1)].push_back(E(e, 0));
    }
  }

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(nv) * 8 + static_cast<std::size_t>(ne) * 4);

  for (int v = 0; v < nv; ++v) {
    if (coarse.is_boundary_vertex(v)) {
      const auto& bn = boundary_neighbors[v];
      if (rule == BoundaryRule::SmoothBoundaryCurve && bn.size() == 2) {
        trips.emplace_back(v, v, 0.75);
        trips.emplace_back(v, bn[0], 0.125);
        trips.emplace_back(v, bn[1], 0.125);
      } else {
        // Fixed rule, or a boundary vertex where two boundary loops touch.
        trips.emplace_back(v, v, 1.0);
      }
      continue;
    }
    const int n = static_cast<int>(neighbors[v].size());
    const double beta = loop_beta(n);
    trips.emplace_back(v, v, 1.0 - n * beta);
    for (int w : neighbors[v]) trips.emplace_back(v, w, beta);
  }

  auto opposite = [&](int f, int e) {
    for (int c = 0; c < 3; ++c)
      if (coarse.face_edge(f, c) == e) return F(f, (c + 2) % 3);
    return -1;
  };

  for (int e = 0; e < ne; ++e) {
    const int row = nv + e;
    if (coarse.is_boundary_edge(e)) {
      trips.emplace_back(row, E(e, 0), 0.5);
      trips.emplace_back(row, E(e, 1), 0.5);
    } else {
      trips.emplace_back(row, E(e, 0), 0.375);
      trips.emplace_back(row, E(e, 1), 0.375);
      trips.emplace_back(row, opposite(EF(e, 0), e), 0.125);
      trips.emplace_back(row, opposite(EF(e, 1), e), 0.125);
    }
  }

  Eigen::SparseMatrix<double> S(nv + ne, nv);
  S.setFromTriplets(trips.begin(), trips.end());

  Triangles fine_faces(4 * nf, 3);
  for (int f = 0; f < nf; ++f) {
    const int a = F(f, 0), b = F(f, 1), c = F(f, 2);
    const int ab = nv + coarse.face_edge(f, 0);
    const int bc = nv + coarse.face_edge(f, 1);
    const int ca = nv + coarse.face_edge(f, 2);
    fine_faces.row(4 * f + 0) << a, ab, ca;
    fine_faces.row(4 * f + 1) << b, bc, ab;
    fine_faces.row(4 * f + 2) << c, ca, bc;
    fine_faces.row(4 * f + 3) << ab, bc, ca;
  }

  Positions fine_vertices = S * coarse.vertices();
  return {TriMesh::build(std::move(fine_vertices), std::move(fine_faces)), std::move(S)};
}

}  // namespace crof
