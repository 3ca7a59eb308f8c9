#pragma once

#include <Eigen/Core>

#include <vector>

namespace crof {

using Positions = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;
using Triangles = Eigen::Matrix<int, Eigen::Dynamic, 3, Eigen::RowMajor>;
using EdgeList = Eigen::Matrix<int, Eigen::Dynamic, 2, Eigen::RowMajor>;

// Indexed, consistently oriented triangle mesh (a 2-manifold, possibly with
// boundary).
//
// Edge e is stored as (lo, hi) with lo < hi; that is its global orientation.
// Face f has three local edge slots: slot c runs from corner c to corner
// (c+1)%3 and is opposite corner (c+2)%3. face_edge(f, c) is the global edge
// index of that slot and face_edge_sign(f, c) is +1 when the face traverses
// the edge lo -> hi, -1 otherwise.
class TriMesh {
 public:
  TriMesh() = default;

  // Validates and indexes the input. Throws InvalidIndex, NonManifoldEdge,
  // NonOrientable or DegenerateFace.
  static TriMesh build(Positions vertices, Triangles faces);

  int vertex_count() const { return static_cast<int>(vertices_.rows()); }
  int face_count() const { return static_cast<int>(faces_.rows()); }
  int edge_count() const { return static_cast<int>(edges_.rows()); }

  const Positions& vertices() const { return vertices_; }
  const Triangles& faces() const { return faces_; }
  const EdgeList& edges() const { return edges_; }
  const Triangles& face_edges() const { return face_edges_; }
  const Triangles& face_edge_signs() const { return face_edge_signs_; }

  int face_edge(int f, int slot) const { return face_edges_(f, slot); }
  int face_edge_sign(int f, int slot) const { return face_edge_signs_(f, slot); }

  // Faces incident to an edge: one for boundary edges, two otherwise. The
  // second entry is -1 on the boundary.
  const EdgeList& edge_faces() const { return edge_faces_; }

  bool is_boundary_vertex(int v) const { return boundary_vertex_[v] != 0; }
  bool is_boundary_edge(int e) const { return edge_faces_(e, 1) < 0; }
  const std::vector<char>& boundary_vertex_flags() const { return boundary_vertex_; }
  int boundary_edge_count() const;
  bool is_closed() const { return boundary_edge_count() == 0; }

  int euler_characteristic() const { return vertex_count() - edge_count() + face_count(); }

  // Same connectivity, new vertex positions. Re-runs the degeneracy check.
  TriMesh with_vertices(Positions vertices) const;

 private:
  Positions vertices_;
  Triangles faces_;
  EdgeList edges_;
  Triangles face_edges_;
  Triangles face_edge_signs_;
  EdgeList edge_faces_;
  std::vector<char> boundary_vertex_;
};

// Intrinsic quantities consumed by every assembly routine. Double areas are
// twice the triangle area; angles(f, c) is the corner angle at corner c.
struct GeometryCache {
  Eigen::VectorXd edge_lengths;
  Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor> angles;
  Eigen::VectorXd double_areas;
  Eigen::VectorXd angle_sums;
  double mean_edge_length = 0.0;

  double length(const TriMesh& mesh, int f, int slot) const {
    return edge_lengths[mesh.face_edge(f, slot)];
  }
};

GeometryCache geometry(const TriMesh& mesh);

// Geometry from prescribed edge lengths only (e.g. an intrinsically flat
// torus that has no embedding in R^3). Throws DegenerateFace when a face
// violates the triangle inequality.
GeometryCache geometry_from_lengths(const TriMesh& mesh, const Eigen::VectorXd& edge_lengths);

struct RegularityReport {
  Eigen::VectorXd ratios;  // circumradius / inradius per face
  double max_ratio = 0.0;
  double min_ratio = 0.0;
};

RegularityReport triangle_regularity(const TriMesh& mesh);

// Twice the area of a triangle with side lengths a, b, c (Kahan's
// cancellation-free Heron formula). Returns 0 for violated triangle
// inequalities.
double double_area_from_lengths(double a, double b, double c);

}  // namespace crof
