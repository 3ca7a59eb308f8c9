#include "crof/convergence.hpp"
#include "crof/error.hpp"
#include "crof/shapes.hpp"
#include "crof/subdivision.hpp"
#include "crof/surface.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace crof;

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

TEST_SUITE("refine_verify") {
  TEST_CASE("Loop subdivision of a single triangle") {
    Positions V(3, 3);
    V << 0, 0, 0, 1, 0, 0, 0, 1, 0;
    Triangles F(1, 3);
    F << 0, 1, 2;
    const Subdivision s = loop_subdivide(TriMesh::build(V, F), BoundaryRule::Fixed);
    CHECK(s.mesh.face_count() == 4);
    CHECK(s.mesh.vertex_count() == 6);
    CHECK(s.mesh.edge_count() == 9);
    // boundary edge midpoints
    CHECK(s.mesh.vertices().row(3 + 0).isApprox(Eigen::RowVector3d(0.5, 0, 0)));
  }

  TEST_CASE("Loop subdivision topology on closed meshes") {
    const TriMesh m = shapes::icosahedron();
    const Subdivision s = loop_subdivide(m, BoundaryRule::Fixed);
    CHECK(s.mesh.vertex_count() == m.vertex_count() + m.edge_count());
    CHECK(s.mesh.face_count() == 4 * m.face_count());
    CHECK(s.mesh.euler_characteristic() == m.euler_characteristic());
  }

  TEST_CASE("Loop weights on a regular interior vertex and edge") {
    const TriMesh m = shapes::icosahedron();
    const Subdivision s = loop_subdivide(m, BoundaryRule::Fixed);
    // valence 5: beta = (5/8 - (3/8 + cos(2 pi / 5) / 4)^2) / 5
    const double c = 3.0 / 8.0 + std::cos(2 * std::numbers::pi / 5) / 4;
    const double beta = (5.0 / 8.0 - c * c) / 5.0;
    CHECK(s.prolongation.coeff(0, 0) == doctest::Approx(1 - 5 * beta).epsilon(1e-14));
    const int e = 0;
    CHECK(s.prolongation.coeff(m.vertex_count() + e, m.edges()(e, 0)) == doctest::Approx(3.0 / 8.0));
    const Eigen::VectorXd row_sums = s.prolongation * Eigen::VectorXd::Ones(m.vertex_count());
    CHECK((row_sums.array() - 1.0).abs().maxCoeff() < 1e-15);
  }

  TEST_CASE("prolongation reproduces the fine positions") {
    const TriMesh m = shapes::annulus(2, 0.5, 1.0, 8);
    for (BoundaryRule rule : {BoundaryRule::Fixed, BoundaryRule::SmoothBoundaryCurve}) {
      const Subdivision s = loop_subdivide(m, rule);
      CHECK((s.prolongation * m.vertices() - s.mesh.vertices()).cwiseAbs().maxCoeff() < 1e-15);
    }
  }

  TEST_CASE("boundary rules") {
    const TriMesh m = shapes::disk(2);
    const Subdivision fixed = loop_subdivide(m, BoundaryRule::Fixed);
    const Subdivision curve = loop_subdivide(m, BoundaryRule::SmoothBoundaryCurve);
    for (int v = 0; v < m.vertex_count(); ++v) {
      if (!m.is_boundary_vertex(v)) continue;
      CHECK(fixed.mesh.vertices().row(v) == m.vertices().row(v));
      CHECK(curve.prolongation.coeff(v, v) == doctest::Approx(0.75));
    }
  }

  TEST_CASE("planar meshes stay planar") {
    TriMesh m = shapes::jittered_grid(4, 4, 0.3, 2);
    for (int level = 0; level < 3; ++level) m = loop_subdivide(m, BoundaryRule::SmoothBoundaryCurve).mesh;
    CHECK(m.vertices().col(2).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("regular planar grids keep their regularity exactly") {
    TriMesh m = shapes::grid(3, 3);
    const double start = triangle_regularity(m).max_ratio;
    for (int level = 0; level < 3; ++level) {
      m = loop_subdivide(m, BoundaryRule::Fixed).mesh;
      CHECK(triangle_regularity(m).max_ratio == doctest::Approx(start).epsilon(1e-12));
    }
  }

  TEST_CASE("regularity of projected refinement is bounded") {
    // Per-level growth shrinks towards 1; the first refinements of a curved
    // coarse mesh still move triangle shapes by a few percent.
    struct Family {
      TriMesh mesh;
      SmoothSurface surface;
      int settled;  // level from which growth stays within 1%
    };
    const SmoothSurface monge = SmoothSurface::parse("monge:x^2");
    for (const Family& fam : {Family{shapes::icosahedron(), SmoothSurface::parse("sphere:1"), 2},
                              Family{project_to_surface(shapes::grid(4, 4, -1, 1, -1, 1), monge), monge, 3}}) {
      TriMesh m = fam.mesh;
      std::vector<double> ratio{triangle_regularity(m).max_ratio};
      for (int level = 1; level <= 5; ++level) {
        m = project_to_surface(loop_subdivide(m, BoundaryRule::Fixed).mesh, fam.surface);
        ratio.push_back(triangle_regularity(m).max_ratio);
      }
      for (std::size_t k = 1; k < ratio.size(); ++k) {
        CHECK(ratio[k] < 1.2 * ratio[0]);
        if (static_cast<int>(k) > fam.settled) CHECK(ratio[k] <= 1.01 * ratio[k - 1]);
        if (k >= 2) CHECK(ratio[k] / ratio[k - 1] <= ratio[k - 1] / ratio[k - 2]);
      }
    }
  }

  TEST_CASE("projected refinement stays inscribed") {
    const SmoothSurface sphere = SmoothSurface::parse("sphere:1.0");
    TriMesh m = shapes::icosahedron();
    for (int level = 0; level < 3; ++level) {
      m = project_to_surface(loop_subdivide(m, BoundaryRule::Fixed).mesh, sphere);
      CHECK(max_surface_residual(m, sphere) <= 1e-12);
    }
    const SmoothSurface ellipsoid = SmoothSurface::parse("ellipsoid:1,1.5,0.7");
    TriMesh e = project_to_surface(shapes::icosphere(2), ellipsoid);
    CHECK(max_surface_residual(e, ellipsoid) <= 1e-10);
    const TriMesh again = project_to_surface(e, ellipsoid);
    CHECK((again.vertices() - e.vertices()).cwiseAbs().maxCoeff() <= 1e-12);
  }

  TEST_CASE("Monge projection snaps the height") {
    const SmoothSurface s = SmoothSurface::parse("monge:x^2");
    const Eigen::Vector3d p = s.project(Eigen::Vector3d(0.5, 0.0, 0.1));
    CHECK(p.isApprox(Eigen::Vector3d(0.5, 0.0, 0.25)));
    CHECK(s.project(p) == p);
  }

  TEST_CASE("Monge partials agree with finite differences") {
    const SmoothSurface s = SmoothSurface::parse("monge:0.3x^3 - 0.2x*y^2 + y^4 + 0.5xy - 1");
    const double h = 1e-4;
    for (const auto& [x, y] : std::vector<std::pair<double, double>>{{0.3, -0.7}, {-1.1, 0.4}, {0.0, 0.9}}) {
      const auto z = [&](double a, double b) { return s.monge_at(a, b).z; };
      const MongeDerivatives d = s.monge_at(x, y);
      CHECK(d.zx == doctest::Approx((z(x + h, y) - z(x - h, y)) / (2 * h)).epsilon(1e-6));
      CHECK(d.zy == doctest::Approx((z(x, y + h) - z(x, y - h)) / (2 * h)).epsilon(1e-6));
      CHECK(d.zxx == doctest::Approx((z(x + h, y) - 2 * z(x, y) + z(x - h, y)) / (h * h)).epsilon(1e-5));
      CHECK(d.zxy ==
            doctest::Approx((z(x + h, y + h) - z(x + h, y - h) - z(x - h, y + h) + z(x - h, y - h)) / (4 * h * h))
                .epsilon(1e-5));
    }
  }

  TEST_CASE("polynomial grammar") {
    const Polynomial2 p = Polynomial2::parse("1 + 2x - y");
    CHECK(p(0.5, 3.0) == doctest::Approx(-1.0));
    CHECK(Polynomial2::parse("0.5*x^2*y^2").eval(2, 2, 1.0, 1.0) == doctest::Approx(2.0));
    CHECK(Polynomial2::parse("-x^4").eval(4, 0, 0.0, 0.0) == doctest::Approx(-24.0));
    for (const char* bad : {"x^5", "x^", "2 ** x", "sin(x)", "", "x y z"})
      CHECK(code_of([&] { Polynomial2::parse(bad); }) == ErrorCode::ParseError);
    CHECK(code_of([] { SmoothSurface::parse("cylinder:1"); }) == ErrorCode::ParseError);
    CHECK(code_of([] { SmoothSurface::parse("sphere:-1"); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("smooth reference energy on Monge patches") {
    const ParamMesh unit = param_grid(4, 4, 0, 1, 0, 1);
    const SmoothSurface flat = SmoothSurface::parse("monge:0");
    CHECK(smooth_energy_monge(flat, Polynomial2::parse("x^2"), unit, triangle_rule_degree4()) ==
          doctest::Approx(2.0).epsilon(1e-14));
    CHECK(smooth_energy_monge(SmoothSurface::parse("monge:x^2+y^2"), Polynomial2::parse("3"), unit,
                              triangle_rule_degree4()) == 0.0);

    const SmoothSurface bump = SmoothSurface::parse("monge:x^2+y^2");
    const ParamMesh square = param_grid(64, 64, -1, 1, -1, 1);
    const double e4 = smooth_energy_monge(bump, Polynomial2::parse("x"), square, triangle_rule_degree4());
    const double e7 = smooth_energy_monge(bump, Polynomial2::parse("x"), square, triangle_rule_degree7());
    CHECK(std::abs(e4 - e7) / std::abs(e7) < 1e-8);
    CHECK(e7 > 0.0);

    // z = f = x^2 reduces to 1/2 ∫∫ 4 (1 + 4x^2)^(-7/2) dx dy; substituting
    // 2x = tan t gives 4 (s - 2 s^3 / 3 + s^5 / 5) with s = 2 / sqrt 5.
    const double s = 2.0 / std::sqrt(5.0);
    const double exact = 4.0 * (s - 2 * s * s * s / 3 + std::pow(s, 5) / 5);
    const double e = smooth_energy_monge(SmoothSurface::parse("monge:x^2"), Polynomial2::parse("x^2"),
                                         param_grid(128, 128, -1, 1, -1, 1), triangle_rule_degree7());
    CHECK(e == doctest::Approx(exact).epsilon(1e-10));
    CHECK(code_of([&] {
            smooth_energy_monge(SmoothSurface::parse("sphere:1"), Polynomial2::parse("x"), unit,
                                triangle_rule_degree4());
          }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("random split refinement") {
    const TriMesh m = shapes::grid(3, 3);
    const Subdivision s = random_split(m, 7);
    CHECK(s.mesh.vertex_count() == m.vertex_count() + m.face_count());
    CHECK(s.mesh.face_count() == 3 * m.face_count());
    CHECK((s.prolongation * m.vertices() - s.mesh.vertices()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(random_split(m, 7).mesh.vertices() == s.mesh.vertices());
  }

  TEST_CASE("log-log slope and record export") {
    std::vector<ConvergenceLevel> levels;
    for (int i = 0; i < 4; ++i) {
      const double h = std::pow(0.5, i);
      levels.push_back({i, 10 * (i + 1), h, 3.0 * h * h});
    }
    CHECK(fit_loglog_slope(levels) == doctest::Approx(2.0).epsilon(1e-12));
    ConvergenceRecord r;
    r.levels = levels;
    CHECK(r.monotone_decreasing());
    const std::string path = test::tmp_path("record.csv");
    save_convergence_csv(r, path);
    const std::string text = test::read_text(path);
    CHECK(text.rfind("level,vertices,h,error\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);
  }

  TEST_CASE("short forward study decreases") {
    ForwardProblem p;
    p.levels = 3;
    p.reference_cells = 64;
    const ConvergenceRecord r = forward_energy_study(p);
    CHECK(r.levels.size() == 3);
    CHECK(r.monotone_decreasing());
    CHECK(r.reference_agreement < 1e-8);
    for (std::size_t i = 1; i < r.levels.size(); ++i) CHECK(r.levels[i].h < r.levels[i - 1].h);
  }

  TEST_CASE("short self-convergence study on a disk") {
    const TriMesh base = shapes::disk(3);
    Constraints c;
    c.add(0, 1.0);
    c.add(3, -0.5);
    c.add(9, 0.25);
    c.add(14, 0.75);
    SelfConvergenceProblem p{base, c};
    p.levels = 3;
    const ConvergenceRecord r = self_convergence_study(p);
    CHECK(r.levels.size() == 3);
    CHECK(r.monotone_decreasing());
    CHECK(r.strategy.find("loop") != std::string::npos);
  }

  TEST_CASE("irregular refinement is reported without assertions on the slope") {
    const TriMesh base = shapes::disk(2);
    Constraints c;
    c.add(0, 1.0);
    c.add(1, -0.5);
    c.add(3, 0.25);
    SelfConvergenceProblem p{base, c};
    p.levels = 3;
    p.strategy = RefinementStrategy::RandomSplit;
    const ConvergenceRecord r = self_convergence_study(p);
    CHECK(r.levels.size() == 3);
    CHECK(std::isfinite(r.slope));
    MESSAGE("random-split slope: " << r.slope);
  }
}
