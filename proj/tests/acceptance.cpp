// Acceptance suite: one PASS/FAIL line per criterion with the measured
// values, the pinned tolerance and the runtime budget. Exits nonzero if any
// criterion fails.

#include "crof/convergence.hpp"
#include "crof/curvature.hpp"
#include "crof/oracle.hpp"
#include "crof/shapes.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace crof;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (detail.tellp() > 0) detail << "; ";
    detail << what << (ok ? "" : " [violated]");
  }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// Two counterclockwise flat triangles sharing an edge, with shuffled labels.
TriMesh random_pair(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Eigen::Vector2d a(u(rng), u(rng));
  Eigen::Vector2d b;
  do b = Eigen::Vector2d(u(rng), u(rng));
  while ((b - a).norm() < 0.3);
  const Eigen::Vector2d n(-(b - a).y(), (b - a).x());
  std::uniform_real_distribution<double> along(-0.5, 1.5), off(0.2, 1.5);
  const Eigen::Vector2d pts[4] = {a, b, a + along(rng) * (b - a) + off(rng) * n,
                                  a + along(rng) * (b - a) - off(rng) * n};
  std::array<int, 4> label{0, 1, 2, 3};
  std::shuffle(label.begin(), label.end(), rng);
  Positions V(4, 3);
  for (int i = 0; i < 4; ++i) V.row(label[i]) << pts[i].x(), pts[i].y(), 0.0;
  Triangles F(2, 3);
  F.row(0) << label[0], label[1], label[2];
  F.row(1) << label[1], label[0], label[3];
  return TriMesh::build(std::move(V), std::move(F));
}

int edge_between(const TriMesh& m, int a, int b) {
  for (int e = 0; e < m.edge_count(); ++e)
    if (m.edges()(e, 0) == std::min(a, b) && m.edges()(e, 1) == std::max(a, b)) return e;
  return -1;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

void oracle_fidelity(Outcome& out) {
  std::mt19937_64 rng(20240601);
  double worst[3] = {0, 0, 0};
  for (int trial = 0; trial < 100; ++trial) {
    const TriMesh m = random_pair(rng);
    const GeometryCache g = geometry(m);
    const CrofDofMap dofs(m);
    const OracleMatrices o = quadrature_oracle_planar(m, triangle_rule_degree4());
    worst[0] = std::max(worst[0], compare_matrices(assemble_L(m, g, dofs), o.L).max_relative_error);
    worst[1] = std::max(worst[1], compare_matrices(assemble_M(m, g, dofs), o.M).max_relative_error);
    worst[2] = std::max(worst[2], compare_matrices(assemble_D(m, g, dofs), o.D).max_relative_error);
  }
  const char* names[3] = {"L", "M", "D"};
  for (int i = 0; i < 3; ++i) out.require(worst[i] <= 1e-9, std::string(names[i]) + fmt(" rel %.2e <= 1e-9", worst[i]));

  // cone fan: 6 sectors with tip angle pi/4, face weight pi/12
  const TriMesh m = shapes::cone_fan(6, pi / 4, 1.0);
  const GeometryCache g = geometry(m);
  const CrofDofMap dofs(m);
  const SparseMatrix K = assemble_K(m, g, angle_defects(m, g), dofs);
  const double w = pi / 12, rim = 2 * std::sin(pi / 8);
  double k_err = 0.0;
  for (int j = 1; j <= 6; ++j) {
    const int spoke = edge_between(m, 0, j), ring = edge_between(m, j, j % 6 + 1), next = edge_between(m, 0, j % 6 + 1);
    const std::pair<double, double> checks[] = {
        {K.coeff(dofs.parallel(spoke), dofs.parallel(spoke)), 2 * w},
        {K.coeff(dofs.perpendicular(spoke), dofs.perpendicular(spoke)), 2 * w},
        {K.coeff(dofs.parallel(ring), dofs.parallel(ring)), w / (rim * rim)},
        {K.coeff(dofs.parallel(spoke), dofs.parallel(next)), w * std::cos(pi / 4)},
        {K.coeff(dofs.perpendicular(spoke), dofs.perpendicular(next)), w * std::cos(pi / 4)},
        {std::abs(K.coeff(dofs.parallel(spoke), dofs.perpendicular(next))), w * std::sin(pi / 4)},
    };
    for (const auto& [got, want] : checks) k_err = std::max(k_err, rel(got, want));
  }
  out.require(k_err <= 1e-9, fmt("cone-fan K rel %.2e <= 1e-9", k_err));
}

// sin of the largest principal angle between span(V) and span(T), both in
// the B inner product; V is B-orthonormal.
double subspace_sine(const Eigen::MatrixXd& V, const Eigen::MatrixXd& T, const SparseMatrix& B) {
  const Eigen::MatrixXd G = T.transpose() * (B * T);
  const Eigen::MatrixXd L = G.llt().matrixL();
  const Eigen::MatrixXd Tn = L.triangularView<Eigen::Lower>().solve(T.transpose()).transpose();
  const Eigen::MatrixXd R = Tn - V * (V.transpose() * (B * Tn));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(R.transpose() * (B * R), Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

void null_spaces(Outcome& out) {
  double worst = 0.0;
  const TriMesh bumpy = project_to_surface(shapes::jittered_grid(8, 8, 0.3, 5, -1, 1, -1, 1),
                                           SmoothSurface::parse("monge:0.4x^2 + 0.3xy - 0.2y^3"));
  for (const TriMesh& m : {shapes::tetrahedron(), shapes::icosphere(3), shapes::torus(24, 12, 2.0, 0.7), bumpy,
                           shapes::jittered_grid(10, 10, 0.3, 9)}) {
    const EnergyOperator op = build_curved_hessian(m);
    worst = std::max(worst, (op.Q() * Eigen::VectorXd::Ones(op.size())).cwiseAbs().maxCoeff() / max_abs(op.Q()));
  }
  out.require(worst <= 1e-10, fmt("(a) |Q 1|/|Q| %.2e <= 1e-10", worst));

  const TriMesh disk = shapes::disk(25);
  const EnergyOperator op = build_curved_hessian(disk);
  const EigenResult r = smallest_eigs(op, 5);
  const int zeros = kernel_dimension(r, op.scale());
  std::ostringstream vals;
  vals << "(b) disk " << disk.vertex_count() << " vertices: " << zeros << " zero eigenvalues (mu_2/scale "
       << fmt("%.1e", r.values[2] / op.scale()) << ", mu_3/scale " << fmt("%.1e", r.values[3] / op.scale()) << ")";
  out.require(zeros == 3, vals.str());
  Eigen::MatrixXd T(disk.vertex_count(), 3);
  T.col(0).setOnes();
  T.col(1) = disk.vertices().col(0);
  T.col(2) = disk.vertices().col(1);
  const double sine = subspace_sine(r.vectors.leftCols(3), T, op.B());
  out.require(sine < 1e-4, fmt("span{1,x,y} angle %.2e < 1e-4", std::asin(std::min(1.0, sine))));

  const EnergyOperator sphere = build_curved_hessian(shapes::icosphere(3));
  const int sphere_zeros = kernel_dimension(smallest_eigs(sphere, 4), sphere.scale());
  out.require(sphere_zeros == 1, "(c) sphere zero eigenvalues " + std::to_string(sphere_zeros) + " == 1");
}

void sphere_spectrum(Outcome& out) {
  const EnergyOperator op = build_curved_hessian(shapes::icosphere(4));
  const EigenResult r = smallest_eigs(op, 5);
  double worst = 0.0;
  for (int i = 1; i <= 3; ++i) worst = std::max(worst, rel(r.values[i], 4.0));
  const double spread = (r.values[3] - r.values[1]) / r.values[1];
  out.require(worst <= 0.05, fmt("level 4: mu_2..4 within %.2e", worst) + " of 4 (<= 5%)");
  out.require(spread <= 0.02, fmt("cluster spread %.2e <= 2%%", spread));

  const ConvergenceRecord rec = sphere_eigenvalue_study({2, 5, EnergyKind::CurvedHessian});
  std::ostringstream errs;
  errs << "errors";
  for (const auto& l : rec.levels) errs << ' ' << fmt("%.3e", l.error);
  out.require(rec.monotone_decreasing(), errs.str() + " monotone");
  out.require(rec.slope >= 0.8, fmt("slope %.3f >= 0.8", rec.slope));
}

void gauss_bonnet(Outcome& out) {
  for (const auto& [name, m] : {std::pair{"tetrahedron", shapes::tetrahedron()}, {"icosahedron", shapes::icosahedron()}}) {
    const double err = std::abs(angle_defects(m, geometry(m)).total() - 4 * pi);
    out.require(err <= 1e-12, std::string(name) + fmt(" |sum - 4pi| %.1e <= 1e-12", err));
  }
  const auto flat = shapes::flat_torus(16, 12, 1.0, 1.3);
  const double t = std::abs(angle_defects(flat.mesh, geometry_from_lengths(flat.mesh, flat.edge_lengths)).total());
  out.require(t <= 1e-12, fmt("flat torus |sum| %.1e <= 1e-12", t));
}

void forward_energy(Outcome& out) {
  ForwardProblem p;
  p.levels = 4;
  const ConvergenceRecord rec = forward_energy_study(p);
  std::ostringstream errs;
  errs << "E_exact " << fmt("%.10f", rec.reference) << ", errors";
  for (const auto& l : rec.levels) errs << ' ' << fmt("%.3e", l.error);
  out.require(rec.levels.size() == 4 && rec.monotone_decreasing(), errs.str() + " monotone");
  out.require(rec.slope >= 0.8, fmt("slope %.3f >= 0.8", rec.slope));
  out.require(rec.reference_agreement <= 1e-8, fmt("deg4/deg7 agreement %.1e <= 1e-8", rec.reference_agreement));
}

void interpolation_self_convergence(Outcome& out) {
  SelfConvergenceProblem p;
  p.base = shapes::annulus(3, 0.5, 1.0, 12);
  std::vector<int> interior;
  for (int v = 0; v < p.base.vertex_count(); ++v)
    if (!p.base.is_boundary_vertex(v)) interior.push_back(v);
  const std::size_t stride = std::max<std::size_t>(1, interior.size() / 6);
  for (std::size_t i = 0; i < interior.size() && p.constraints.size() < 6; i += stride) {
    const int v = interior[i];
    const double x = p.base.vertices()(v, 0), y = p.base.vertices()(v, 1);
    p.constraints.add(v, std::sin(3 * x) + x * y);
  }
  p.levels = 4;
  p.boundary = BoundaryRule::Fixed;
  const ConvergenceRecord rec = self_convergence_study(p);
  std::ostringstream errs;
  errs << p.constraints.size() << " constraints, " << rec.levels.back().vertices << " -> finest, errors";
  for (const auto& l : rec.levels) errs << ' ' << fmt("%.3e", l.error);
  out.require(rec.monotone_decreasing(), errs.str() + " monotone");
  out.require(rec.slope >= 0.8, fmt("slope %.3f >= 0.8", rec.slope));
}

void linear_reproduction(Outcome& out) {
  const TriMesh m = shapes::jittered_grid(12, 12, 0.3, 99);
  int folded = 0;
  for (int f = 0; f < m.face_count(); ++f) {
    const auto a = m.vertices().row(m.faces()(f, 0)), b = m.vertices().row(m.faces()(f, 1)),
               c = m.vertices().row(m.faces()(f, 2));
    if ((b(0) - a(0)) * (c(1) - a(1)) - (b(1) - a(1)) * (c(0) - a(0)) <= 0.0) ++folded;
  }
  out.require(folded == 0, "folded faces " + std::to_string(folded) + " == 0");
  const EnergyOperator op = build_curved_hessian(m);
  const auto u_star = [&](int v) { return 1.0 + 2.0 * m.vertices()(v, 0) - m.vertices()(v, 1); };
  Constraints c;
  for (int v : {14, 23, 150}) c.add(v, u_star(v));
  const Eigen::VectorXd u = min_with_fixed(op, c);
  double err = 0.0;
  for (int v = 0; v < m.vertex_count(); ++v) err = std::max(err, std::abs(u[v] - u_star(v)));
  out.require(err <= 1e-8, fmt("max |u - u*| %.2e <= 1e-8", err));
}

// Norm of the B-projection of v onto span(W); both B-orthonormal.
double projection_norm(const Eigen::VectorXd& v, const Eigen::MatrixXd& W, const SparseMatrix& B) {
  return (W.transpose() * (B * v)).norm();
}

void baseline_agreement(Outcome& out) {
  // The first nonzero eigenvalue of the sphere is threefold, so individual
  // eigenvectors are arbitrary within the cluster: compare against its span.
  const TriMesh sphere = shapes::icosphere(3);
  const EnergyOperator h = build_curved_hessian(sphere);
  const EnergyOperator l = build_squared_laplacian(sphere);
  const EigenResult rh = smallest_eigs(h, 5), rl = smallest_eigs(l, 5);
  double worst = 1.0;
  for (int i = 1; i <= 3; ++i) worst = std::min(worst, projection_norm(rh.vectors.col(i), rl.vectors.middleCols(1, 3), h.B()));
  out.require(worst > 0.99, fmt("sphere: |P_cluster v| %.6f > 0.99", worst));

  // distinct semi-axes split the cluster; the first eigenvectors then pair up directly
  Positions V = sphere.vertices();
  V.col(1) *= 1.25;
  V.col(2) *= 1.5;
  const TriMesh ellipsoid = sphere.with_vertices(V);
  const EnergyOperator eh = build_curved_hessian(ellipsoid);
  const EnergyOperator el = build_squared_laplacian(ellipsoid);
  const EigenResult sh = smallest_eigs(eh, 2), sl = smallest_eigs(el, 2);
  const double ip = std::abs(sh.vectors.col(1).dot(eh.B() * sl.vectors.col(1)));
  out.require(ip > 0.99, fmt("ellipsoid 1 x 1.25 x 1.5: |<v_h, v_l>_B| %.6f > 0.99", ip));
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "oracle fidelity", 10, oracle_fidelity},
      {2, "null spaces", 30, null_spaces},
      {3, "sphere spectrum", 120, sphere_spectrum},
      {4, "Gauss-Bonnet", 1, gauss_bonnet},
      {5, "forward energy convergence", 120, forward_energy},
      {6, "interpolation self-convergence", 120, interpolation_self_convergence},
      {7, "linear reproduction", 5, linear_reproduction},
      {8, "baseline agreement", 60, baseline_agreement},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.require(seconds < c.budget_seconds, fmt("%.2f s", seconds) + fmt(" < %.0f s", c.budget_seconds));
    if (!out.pass) ++failed;
    std::printf("criterion %d %-32s %s  %s\n", c.id, c.name, out.pass ? "PASS" : "FAIL", out.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
