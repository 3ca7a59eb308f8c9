#include "crof/error.hpp"
#include "crof/mesh.hpp"
#include "crof/shapes.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace crof;

namespace {

TriMesh make(std::initializer_list<std::array<double, 3>> v, std::initializer_list<std::array<int, 3>> f) {
  Positions V(static_cast<Eigen::Index>(v.size()), 3);
  Triangles F(static_cast<Eigen::Index>(f.size()), 3);
  int i = 0;
  for (const auto& p : v) V.row(i++) << p[0], p[1], p[2];
  i = 0;
  for (const auto& t : f) F.row(i++) << t[0], t[1], t[2];
  return TriMesh::build(std::move(V), std::move(F));
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_SUITE("mesh_core") {
  TEST_CASE("single triangle") {
    const TriMesh m = make({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}});
    CHECK(m.vertex_count() == 3);
    CHECK(m.edge_count() == 3);
    CHECK(m.boundary_edge_count() == 3);
    for (int v = 0; v < 3; ++v) CHECK(m.is_boundary_vertex(v));
    // slot c runs from corner c to corner c+1
    for (int c = 0; c < 3; ++c) {
      const int e = m.face_edge(0, c);
      const int a = m.faces()(0, c), b = m.faces()(0, (c + 1) % 3);
      CHECK(m.edges()(e, 0) == std::min(a, b));
      CHECK(m.edges()(e, 1) == std::max(a, b));
      CHECK(m.face_edge_sign(0, c) == (a < b ? 1 : -1));
    }
  }

  TEST_CASE("closed meshes have Euler characteristic 2") {
    for (const TriMesh& m : {shapes::tetrahedron(), shapes::icosahedron(), shapes::icosphere(2)}) {
      CHECK(m.is_closed());
      CHECK(m.euler_characteristic() == 2);
      CHECK(2 * m.edge_count() == 3 * m.face_count());
    }
    CHECK(shapes::torus(8, 6, 2.0, 0.5).euler_characteristic() == 0);
  }

  TEST_CASE("shared edges are traversed in opposite directions") {
    const TriMesh m = shapes::icosphere(1);
    for (int e = 0; e < m.edge_count(); ++e) {
      const int f0 = m.edge_faces()(e, 0), f1 = m.edge_faces()(e, 1);
      REQUIRE(f1 >= 0);
      int s0 = 0, s1 = 0;
      for (int c = 0; c < 3; ++c) {
        if (m.face_edge(f0, c) == e) s0 = m.face_edge_sign(f0, c);
        if (m.face_edge(f1, c) == e) s1 = m.face_edge_sign(f1, c);
      }
      CHECK(s0 * s1 == -1);
    }
  }

  TEST_CASE("edge enumeration is deterministic") {
    const TriMesh a = shapes::jittered_grid(5, 4, 0.2, 3);
    const TriMesh b = TriMesh::build(a.vertices(), a.faces());
    CHECK(a.edges() == b.edges());
    CHECK(a.face_edges() == b.face_edges());
  }

  TEST_CASE("invalid index") {
    CHECK(code_of([] { make({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 3}}); }) == ErrorCode::InvalidIndex);
    CHECK(code_of([] { make({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, -1, 2}}); }) == ErrorCode::InvalidIndex);
    CHECK(code_of([] { make({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 1}}); }) == ErrorCode::InvalidIndex);
  }

  TEST_CASE("edge with three faces is non-manifold") {
    const auto code = code_of([] {
      make({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, -1, 0}}, {{0, 1, 2}, {1, 0, 3}, {0, 1, 4}});
    });
    CHECK(code == ErrorCode::NonManifoldEdge);
  }

  TEST_CASE("inconsistent orientation") {
    const auto code = code_of([] { make({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}}, {{0, 1, 2}, {1, 2, 3}}); });
    CHECK(code == ErrorCode::NonOrientable);
  }

  TEST_CASE("zero-area face") {
    const auto code = code_of([] { make({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, {{0, 1, 2}}); });
    CHECK(code == ErrorCode::DegenerateFace);
  }

  TEST_CASE("geometry of a right triangle") {
    const TriMesh m = make({{0, 0, 0}, {3, 0, 0}, {0, 4, 0}}, {{0, 1, 2}});
    const GeometryCache g = geometry(m);
    CHECK(g.double_areas[0] == doctest::Approx(12.0).epsilon(1e-14));
    CHECK(g.angles(0, 0) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-14));
    CHECK(g.angles(0, 1) == doctest::Approx(std::atan2(4.0, 3.0)).epsilon(1e-14));
    CHECK(g.angles.row(0).sum() == doctest::Approx(std::numbers::pi).epsilon(1e-14));
    CHECK(g.length(m, 0, 1) == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(g.mean_edge_length == doctest::Approx(4.0).epsilon(1e-14));
  }

  TEST_CASE("Heron from lengths matches embedded area") {
    CHECK(double_area_from_lengths(3, 4, 5) == doctest::Approx(12.0).epsilon(1e-14));
    CHECK(double_area_from_lengths(1, 1, 3) == 0.0);
    // needle triangle, cancellation-prone
    const double eps = 1e-7;
    CHECK(double_area_from_lengths(1.0, 1.0, eps) == doctest::Approx(eps * std::sqrt(1 - eps * eps / 4)).epsilon(1e-9));
  }

  TEST_CASE("geometry_from_lengths reproduces embedded geometry") {
    const TriMesh m = shapes::icosphere(1);
    const GeometryCache a = geometry(m);
    const GeometryCache b = geometry_from_lengths(m, a.edge_lengths);
    CHECK((a.angles - b.angles).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((a.double_areas - b.double_areas).cwiseAbs().maxCoeff() < 1e-13);
  }

  TEST_CASE("flat torus lengths give a flat intrinsic metric") {
    const auto t = shapes::flat_torus(8, 6, 1.0, 1.5);
    const GeometryCache g = geometry_from_lengths(t.mesh, t.edge_lengths);
    for (int v = 0; v < t.mesh.vertex_count(); ++v)
      CHECK(g.angle_sums[v] == doctest::Approx(2 * std::numbers::pi).epsilon(1e-13));
  }

  TEST_CASE("triangle regularity of equilateral triangles is 2") {
    const TriMesh m = make({{0, 0, 0}, {1, 0, 0}, {0.5, std::sqrt(3.0) / 2, 0}}, {{0, 1, 2}});
    CHECK(triangle_regularity(m).max_ratio == doctest::Approx(2.0).epsilon(1e-13));
  }

  TEST_CASE("with_vertices keeps connectivity and rechecks degeneracy") {
    const TriMesh m = shapes::grid(2, 2);
    Positions moved = m.vertices();
    moved.col(2).setConstant(1.0);
    const TriMesh lifted = m.with_vertices(moved);
    CHECK(lifted.edges() == m.edges());
    Positions squashed = m.vertices();
    squashed.col(1).setZero();
    CHECK(code_of([&] { (void)m.with_vertices(squashed); }) == ErrorCode::DegenerateFace);
  }

  TEST_CASE("shape generators") {
    const TriMesh tet = shapes::tetrahedron();
    const GeometryCache g = geometry(tet);
    CHECK((g.edge_lengths.array() - 1.0).abs().maxCoeff() < 1e-14);
    CHECK(shapes::icosphere(3).vertex_count() == 642);
    CHECK(shapes::disk(25).vertex_count() == 1951);
    const TriMesh disk = shapes::disk(3);
    CHECK(disk.euler_characteristic() == 1);
    const TriMesh annulus = shapes::annulus(3, 0.5, 1.0, 12);
    CHECK(annulus.euler_characteristic() == 0);
    CHECK(shapes::grid(3, 2).vertex_count() == 12);
    CHECK(shapes::cone_fan(6, std::numbers::pi / 4).vertex_count() == 7);
  }
}
