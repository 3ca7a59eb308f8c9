#include "crof/mesh.hpp"

#include "crof/error.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <unordered_map>

namespace crof {

namespace {

constexpr double kDegenerateRelativeArea = 1e-12;

std::uint64_t edge_key(int a, int b) {
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

double mean_embedded_edge_length(const Positions& V, const EdgeList& E) {
  if (E.rows() == 0) return 0.0;
  double total = 0.0;
  for (Eigen::Index e = 0; e < E.rows(); ++e)
    total += (V.row(E(e, 1)) - V.row(E(e, 0))).norm();
  return total / static_cast<double>(E.rows());
}

void check_degenerate_faces(const Positions& V, const Triangles& F, const EdgeList& E) {
  const double h = mean_embedded_edge_length(V, E);
  const double threshold = kDegenerateRelativeArea * h * h;
  for (Eigen::Index f = 0; f < F.rows(); ++f) {
    const Eigen::Vector3d a = V.row(F(f, 0)).transpose();
    const Eigen::Vector3d b = V.row(F(f, 1)).transpose();
    const Eigen::Vector3d c = V.row(F(f, 2)).transpose();
    const double double_area = (b - a).cross(c - a).norm();
    if (!(double_area >= threshold) || double_area == 0.0)
      raise(ErrorCode::DegenerateFace, "face " + std::to_string(f) + " has double area " +
                                           std::to_string(double_area));
  }
}

}  // namespace

TriMesh TriMesh::build(Positions vertices, Triangles faces) {
  TriMesh mesh;
  const int nv = static_cast<int>(vertices.rows());
  const int nf = static_cast<int>(faces.rows());

  for (int f = 0; f < nf; ++f) {
    for (int c = 0; c < 3; ++c) {
      const int v = faces(f, c);
      if (v < 0 || v >= nv)
        raise(ErrorCode::InvalidIndex, "face " + std::to_string(f) + " references vertex " +
                                           std::to_string(v) + " of " + std::to_string(nv));
    }
    if (faces(f, 0) == faces(f, 1) || faces(f, 1) == faces(f, 2) || faces(f, 2) == faces(f, 0))
      raise(ErrorCode::InvalidIndex, "face " + std::to_string(f) + " repeats a vertex");
  }
  if (!vertices.allFinite()) raise(ErrorCode::InvalidArgument, "non-finite vertex coordinate");

  std::unordered_map<std::uint64_t, int> index;
  index.reserve(static_cast<std::size_t>(nf) * 2);
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 2>> edge_faces;
  std::vector<std::array<int, 2>> edge_dirs;  // local sign seen by each incident face
  mesh.face_edges_.resize(nf, 3);
  mesh.face_edge_signs_.resize(nf, 3);
  // Reported after the loop so that non-manifold edges take precedence.
  std::optional<std::array<int, 2>> misoriented;

  for (int f = 0; f < nf; ++f) {
    for (int c = 0; c < 3; ++c) {
      const int a = faces(f, c);
      const int b = faces(f, (c + 1) % 3);
      const int lo = std::min(a, b);
      const int hi = std::max(a, b);
      const int sign = a < b ? 1 : -1;
      auto [it, inserted] = index.try_emplace(edge_key(lo, hi), static_cast<int>(edges.size()));
      const int e = it->second;
      if (inserted) {
        edges.push_back({lo, hi});
        edge_faces.push_back({f, -1});
        edge_dirs.push_back({sign, 0});
      } else {
        if (edge_faces[e][1] >= 0)
          raise(ErrorCode::NonManifoldEdge, "edge (" + std::to_string(lo) + ", " +
                                                std::to_string(hi) + ") has more than two faces");
        if (edge_dirs[e][0] == sign && !misoriented) misoriented = std::array<int, 2>{edge_faces[e][0], f};
        edge_faces[e][1] = f;
        edge_dirs[e][1] = sign;
      }
      mesh.face_edges_(f, c) = e;
      mesh.face_edge_signs_(f, c) = sign;
    }
  }

  if (misoriented)
    raise(ErrorCode::NonOrientable, "faces " + std::to_string((*misoriented)[0]) + " and " +
                                        std::to_string((*misoriented)[1]) +
                                        " traverse a shared edge in the same direction");

  const int ne = static_cast<int>(edges.size());
  mesh.edges_.resize(ne, 2);
  mesh.edge_faces_.resize(ne, 2);
  mesh.boundary_vertex_.assign(nv, 0);
  for (int e = 0; e < ne; ++e) {
    mesh.edges_(e, 0) = edges[e][0];
    mesh.edges_(e, 1) = edges[e][1];
    mesh.edge_faces_(e, 0) = edge_faces[e][0];
    mesh.edge_faces_(e, 1) = edge_faces[e][1];
    if (edge_faces[e][1] < 0) {
      mesh.boundary_vertex_[edges[e][0]] = 1;
      mesh.boundary_vertex_[edges[e][1]] = 1;
    }
  }

  check_degenerate_faces(vertices, faces, mesh.edges_);
  mesh.vertices_ = std::move(vertices);
  mesh.faces_ = std::move(faces);
  return mesh;
}

int TriMesh::boundary_edge_count() const {
  int count = 0;
  for (Eigen::Index e = 0; e < edge_faces_.rows(); ++e) count += edge_faces_(e, 1) < 0 ? 1 : 0;
  return count;
}

TriMesh TriMesh::with_vertices(Positions vertices) const {
  if (vertices.rows() != vertices_.rows())
    raise(ErrorCode::DimensionMismatch, "vertex count changed");
  if (!vertices.allFinite()) raise(ErrorCode::InvalidArgument, "non-finite vertex coordinate");
  check_degenerate_faces(vertices, faces_, edges_);
  TriMesh copy = *this;
  copy.vertices_ = std::move(vertices);
  return copy;
}

double double_area_from_lengths(double a, double b, double c) {
  std::array<double, 3> s{a, b, c};
  std::sort(s.begin(), s.end(), std::greater<>());
  const double x = s[0], y = s[1], z = s[2];
  const double p = (x + (y + z)) * (z - (x - y)) * (z + (x - y)) * (x + (y - z));
  if (!(p > 0.0)) return 0.0;
  return 0.5 * std::sqrt(p);
}

GeometryCache geometry_from_lengths(const TriMesh& mesh, const Eigen::VectorXd& edge_lengths) {
  if (edge_lengths.size() != mesh.edge_count())
    raise(ErrorCode::DimensionMismatch, "one length per edge required");
  GeometryCache g;
  g.edge_lengths = edge_lengths;
  const int nf = mesh.face_count();
  g.angles.resize(nf, 3);
  g.double_areas.resize(nf);
  g.angle_sums = Eigen::VectorXd::Zero(mesh.vertex_count());
  g.mean_edge_length = edge_lengths.size() > 0 ? edge_lengths.mean() : 0.0;

  for (int f = 0; f < nf; ++f) {
    // l[c] is the length of slot c, i.e. of the side opposite corner (c+2)%3.
    const std::array<double, 3> l{g.length(mesh, f, 0), g.length(mesh, f, 1),
                                  g.length(mesh, f, 2)};
    const double A = double_area_from_lengths(l[0], l[1], l[2]);
    if (!(A > kDegenerateRelativeArea * g.mean_edge_length * g.mean_edge_length))
      raise(ErrorCode::DegenerateFace, "face " + std::to_string(f) + " violates the triangle inequality");
    g.double_areas[f] = A;
    for (int c = 0; c < 3; ++c) {
      // Corner c sits between slots c and (c+2)%3, opposite slot (c+1)%3.
      const double adj0 = l[c];
      const double adj1 = l[(c + 2) % 3];
      const double opp = l[(c + 1) % 3];
      const double theta = std::atan2(2.0 * A, adj0 * adj0 + adj1 * adj1 - opp * opp);
      g.angles(f, c) = theta;
      g.angle_sums[mesh.faces()(f, c)] += theta;
    }
  }
  return g;
}

GeometryCache geometry(const TriMesh& mesh) {
  const auto& V = mesh.vertices();
  const auto& E = mesh.edges();
  Eigen::VectorXd lengths(mesh.edge_count());
  for (int e = 0; e < mesh.edge_count(); ++e)
    lengths[e] = (V.row(E(e, 1)) - V.row(E(e, 0))).norm();
  return geometry_from_lengths(mesh, lengths);
}

RegularityReport triangle_regularity(const TriMesh& mesh) {
  const GeometryCache g = geometry(mesh);
  RegularityReport report;
  const int nf = mesh.face_count();
  report.ratios.resize(nf);
  for (int f = 0; f < nf; ++f) {
    const double a = g.length(mesh, f, 0);
    const double b = g.length(mesh, f, 1);
    const double c = g.length(mesh, f, 2);
    const double area = 0.5 * g.double_areas[f];
    const double circumradius = a * b * c / (4.0 * area);
    const double inradius = area / (0.5 * (a + b + c));
    report.ratios[f] = circumradius / inradius;
  }
  if (nf > 0) {
    report.max_ratio = report.ratios.maxCoeff();
    report.min_ratio = report.ratios.minCoeff();
  }
  return report;
}

}  // namespace crof
