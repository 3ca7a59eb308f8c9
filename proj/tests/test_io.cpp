#include "crof/error.hpp"
#include "crof/io.hpp"
#include "crof/shapes.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace crof;
using crof::test::read_text;
using crof::test::tmp_path;
using crof::test::write_text;

namespace {

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

TEST_SUITE("io_formats") {
  TEST_CASE("OBJ with quads, slashes and negative indices") {
    const std::string path = tmp_path("quad.obj");
    write_text(path,
               "# square\n"
               "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\n"
               "vt 0 0\nvn 0 0 1\n"
               "f 1/1/1 2/1/1 3/1/1 4/1/1\n");
    const io::MeshData d = io::load_mesh(path);
    CHECK(d.vertices.rows() == 4);
    REQUIRE(d.faces.rows() == 2);
    CHECK(d.faces.row(0) == Eigen::RowVector3i(0, 1, 2));
    CHECK(d.faces.row(1) == Eigen::RowVector3i(0, 2, 3));

    write_text(path, "v 0 0 0\nv 1 0 0\nv 0 1 0\nf -3 -2 -1\n");
    CHECK(io::load_mesh(path).faces.row(0) == Eigen::RowVector3i(0, 1, 2));
  }

  TEST_CASE("OBJ errors") {
    const std::string path = tmp_path("bad.obj");
    write_text(path, "v 0 0 0\nv 1 0\n");
    CHECK(code_of([&] { io::load_mesh(path); }) == ErrorCode::ParseError);
    write_text(path, "v 0 0 0\nv 1 0 0\nl 1 2\n");
    CHECK(code_of([&] { io::load_mesh(path); }) == ErrorCode::UnsupportedElement);
    write_text(path, "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 x\n");
    CHECK(code_of([&] { io::load_mesh(path); }) == ErrorCode::ParseError);
    CHECK(code_of([&] { io::load_mesh(tmp_path("does-not-exist.obj")); }) == ErrorCode::IoError);
    CHECK(code_of([&] { io::load_mesh(tmp_path("mesh.stl")); }) == ErrorCode::UnsupportedElement);
  }

  TEST_CASE("parse errors carry the line number") {
    const std::string path = tmp_path("line.obj");
    write_text(path, "v 0 0 0\nv 1 0 0\nv 0 1 zz\n");
    try {
      io::load_mesh(path);
      FAIL("expected ParseError");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    }
  }

  TEST_CASE("OFF") {
    const std::string path = tmp_path("tri.off");
    write_text(path, "OFF\n# comment\n4 2 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n3 0 1 2\n3 0 2 3\n");
    const TriMesh m = io::read_mesh(path);
    CHECK(m.vertex_count() == 4);
    CHECK(m.face_count() == 2);
    write_text(path, "OFF\n4 2 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n3 0 1 2\n");
    CHECK(code_of([&] { io::load_mesh(path); }) == ErrorCode::ParseError);
  }

  TEST_CASE("ASCII PLY with extra properties") {
    const std::string path = tmp_path("extra.ply");
    write_text(path,
               "ply\nformat ascii 1.0\ncomment x\nelement vertex 3\n"
               "property float x\nproperty float y\nproperty float z\nproperty float quality\n"
               "element face 1\nproperty list uchar int vertex_indices\nend_header\n"
               "0 0 0 7\n1 0 0 7\n0 1 0 7\n3 0 1 2\n");
    const io::MeshData d = io::load_mesh(path);
    CHECK(d.vertices(1, 0) == 1.0);
    CHECK(d.faces.rows() == 1);
  }

  TEST_CASE("PLY rejects binary and edge elements") {
    const std::string path = tmp_path("bin.ply");
    write_text(path, "ply\nformat binary_little_endian 1.0\nelement vertex 0\nend_header\n");
    CHECK(code_of([&] { io::load_mesh(path); }) == ErrorCode::UnsupportedElement);
    write_text(path,
               "ply\nformat ascii 1.0\nelement vertex 2\nproperty float x\nproperty float y\nproperty float z\n"
               "element edge 1\nproperty int vertex1\nproperty int vertex2\nend_header\n0 0 0\n1 0 0\n0 1\n");
    CHECK(code_of([&] { io::load_mesh(path); }) == ErrorCode::UnsupportedElement);
  }

  TEST_CASE("field export round trip through CSV") {
    const TriMesh m = shapes::grid(2, 2);
    Eigen::VectorXd u(m.vertex_count());
    for (int v = 0; v < m.vertex_count(); ++v) u[v] = std::sqrt(2.0) * v + 1.0 / 3.0;
    io::FieldExport field(m);
    field.add("u", u);
    const std::string path = tmp_path("field.csv");
    io::save_field(field, path, io::FieldFormat::Csv);
    const io::CsvTable t = io::read_csv(path);
    CHECK(t.header == std::vector<std::string>{"index", "x", "y", "z", "u"});
    CHECK(t.column("u") == u);  // 17 significant digits round-trip exactly
    CHECK(code_of([&] { (void)t.column("missing"); }) == ErrorCode::InvalidName);
  }

  TEST_CASE("field PLY reloads as a mesh") {
    const TriMesh m = shapes::icosphere(1);
    io::FieldExport field(m);
    field.add("k", Eigen::VectorXd::LinSpaced(m.vertex_count(), 0, 1));
    const std::string path = tmp_path("field.ply");
    io::save_field(field, path, io::FieldFormat::Ply);
    const TriMesh back = io::read_mesh(path);
    CHECK(back.faces() == m.faces());
    CHECK((back.vertices() - m.vertices()).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(read_text(path).find("property float k") != std::string::npos);
  }

  TEST_CASE("field export validation") {
    const TriMesh m = shapes::grid(1, 1);
    io::FieldExport field(m);
    field.add("a", Eigen::VectorXd::Zero(4));
    CHECK(code_of([&] { field.add("a", Eigen::VectorXd::Zero(4)); }) == ErrorCode::InvalidName);
    CHECK(code_of([&] { field.add("", Eigen::VectorXd::Zero(4)); }) == ErrorCode::InvalidName);
    CHECK(code_of([&] { field.add("b c", Eigen::VectorXd::Zero(4)); }) == ErrorCode::InvalidName);
    CHECK(code_of([&] { field.add("b", Eigen::VectorXd::Zero(3)); }) == ErrorCode::DimensionMismatch);
  }

  TEST_CASE("Matrix Market round trip") {
    Eigen::SparseMatrix<double> sym(3, 3), gen(2, 3);
    std::vector<Eigen::Triplet<double>> t{{0, 0, 2.0}, {1, 0, -0.1}, {0, 1, -0.1}, {2, 2, 1e-300}};
    sym.setFromTriplets(t.begin(), t.end());
    std::vector<Eigen::Triplet<double>> g{{0, 2, 1.0 / 3.0}, {1, 0, -7.0}};
    gen.setFromTriplets(g.begin(), g.end());
    const std::string ps = tmp_path("sym.mtx"), pg = tmp_path("gen.mtx");
    io::save_matrix(sym, ps);
    io::save_matrix(gen, pg);
    CHECK(read_text(ps).find("symmetric") != std::string::npos);
    CHECK(read_text(pg).find("general") != std::string::npos);
    CHECK((Eigen::MatrixXd(io::load_matrix(ps)) - Eigen::MatrixXd(sym)).norm() == 0.0);
    CHECK((Eigen::MatrixXd(io::load_matrix(pg)) - Eigen::MatrixXd(gen)).norm() == 0.0);
  }

  TEST_CASE("constraints file") {
    const std::string path = tmp_path("c.csv");
    write_text(path, "vertex,value\n0,1.5\n4,-2\n\n7,0.25\n");
    const auto c = io::read_constraints(path);
    REQUIRE(c.size() == 3);
    CHECK(c[1] == std::pair<int, double>{4, -2.0});
    write_text(path, "0,1\n1\n");
    CHECK(code_of([&] { io::read_constraints(path); }) == ErrorCode::ParseError);
  }

  TEST_CASE("format_double is round-trip safe") {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(io::format_double(x)) == x);
  }
}
