#include "crof/oracle.hpp"

#include "crof/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace crof {

namespace {

Eigen::Vector2d quarter_turn(const Eigen::Vector2d& v) { return {-v.y(), v.x()}; }

struct FaceFrame {
  std::array<Eigen::Vector2d, 3> corner;
  std::array<Eigen::Vector2d, 3> grad_bary;
  double area = 0.0;
};

FaceFrame frame_from_points(const std::array<Eigen::Vector2d, 3>& p) {
  FaceFrame fr;
  fr.corner = p;
  Eigen::Matrix2d T;
  T.col(0) = p[1] - p[0];
  T.col(1) = p[2] - p[0];
  fr.area = 0.5 * T.determinant();
  const Eigen::Matrix2d Ti = T.inverse();
  fr.grad_bary[1] = Ti.row(0).transpose();
  fr.grad_bary[2] = Ti.row(1).transpose();
  fr.grad_bary[0] = -(fr.grad_bary[1] + fr.grad_bary[2]);
  return fr;
}

// Covector of local DOF a (2 * slot + perpendicular) as a 2D vector.
Eigen::Vector2d covector(const TriMesh& mesh, int f, const FaceFrame& fr, int a) {
  const int slot = a / 2;
  const Eigen::Vector2d t = mesh.face_edge_sign(f, slot) *
                            (fr.corner[(slot + 1) % 3] - fr.corner[slot]);
  const Eigen::Vector2d dir = (a % 2 == 0) ? t : quarter_turn(t);
  return dir / t.squaredNorm();
}

// Crouzeix-Raviart function of slot s at barycentric point lam: 1 - 2 λ_opp.
double cr_value(int slot, const std::array<double, 3>& lam) { return 1.0 - 2.0 * lam[(slot + 2) % 3]; }

int global_dof(const TriMesh& mesh, int f, int a) { return 2 * mesh.face_edge(f, a / 2) + a % 2; }

}  // namespace

OracleMatrices quadrature_oracle_planar(const TriMesh& mesh, const TriangleRule& rule) {
  const auto& V = mesh.vertices();
  const auto& F = mesh.faces();
  if (V.rows() > 0 && V.col(2).cwiseAbs().maxCoeff() != 0.0)
    raise(ErrorCode::InvalidArgument, "planar oracle needs z = 0 for every vertex");
  const int m = 2 * mesh.edge_count();
  std::vector<Eigen::Triplet<double>> tl, tm, td;
  for (int f = 0; f < mesh.face_count(); ++f) {
    std::array<Eigen::Vector2d, 3> p;
    for (int c = 0; c < 3; ++c) p[c] = V.row(F(f, c)).head<2>().transpose();
    const FaceFrame fr = frame_from_points(p);
    if (!(fr.area > 0.0)) raise(ErrorCode::InvalidArgument, "planar oracle needs counterclockwise faces");

    std::array<Eigen::Vector2d, 6> omega;
    std::array<Eigen::Vector2d, 6> grad_b;
    for (int a = 0; a < 6; ++a) {
      omega[a] = covector(mesh, f, fr, a);
      grad_b[a] = -2.0 * fr.grad_bary[(a / 2 + 2) % 3];
    }
    for (int a = 0; a < 6; ++a) {
      const Eigen::Matrix2d grad_a = omega[a] * grad_b[a].transpose();
      for (int b = 0; b < 6; ++b) {
        const Eigen::Matrix2d grad_bb = omega[b] * grad_b[b].transpose();
        double l = 0.0, mass = 0.0;
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
          const auto& lam = rule.points[q];
          l += rule.weights[q] * (grad_a.array() * grad_bb.array()).sum();
          mass += rule.weights[q] * cr_value(a / 2, lam) * cr_value(b / 2, lam) * omega[a].dot(omega[b]);
        }
        tl.emplace_back(global_dof(mesh, f, a), global_dof(mesh, f, b), l * fr.area);
        tm.emplace_back(global_dof(mesh, f, a), global_dof(mesh, f, b), mass * fr.area);
      }
      for (int c = 0; c < 3; ++c) {
        double d = 0.0;
        for (std::size_t q = 0; q < rule.points.size(); ++q)
          d += rule.weights[q] * cr_value(a / 2, rule.points[q]) * omega[a].dot(fr.grad_bary[c]);
        td.emplace_back(global_dof(mesh, f, a), F(f, c), d * fr.area);
      }
    }
  }
  OracleMatrices out;
  out.L.resize(m, m);
  out.L.setFromTriplets(tl.begin(), tl.end());
  out.M.resize(m, m);
  out.M.setFromTriplets(tm.begin(), tm.end());
  out.D.resize(m, mesh.vertex_count());
  out.D.setFromTriplets(td.begin(), td.end());
  out.K.resize(m, m);
  return out;
}

SparseMatrix curvature_oracle(const TriMesh& mesh, const GeometryCache& geom, const AngleDefects& defects) {
  const int m = 2 * mesh.edge_count();
  std::vector<Eigen::Triplet<double>> trips;
  for (int f = 0; f < mesh.face_count(); ++f) {
    // Lay the face out intrinsically: corner 0 at the origin, corner 1 on
    // the x axis, corner 2 above it.
    const double l0 = geom.length(mesh, f, 0);
    const double l2 = geom.length(mesh, f, 2);
    const double theta0 = geom.angles(f, 0);
    const FaceFrame fr = frame_from_points(
        {Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(l0, 0.0), Eigen::Vector2d(l2 * std::cos(theta0), l2 * std::sin(theta0))});
    std::array<Eigen::Vector2d, 6> omega;
    for (int a = 0; a < 6; ++a) omega[a] = covector(mesh, f, fr, a);
    for (int c = 0; c < 3; ++c) {
      const int v = mesh.faces()(f, c);
      const double kappa = defects.defects[v];
      if (kappa == 0.0) continue;
      const double weight = geom.angles(f, c) / defects.angle_sums[v] * kappa;
      std::array<double, 3> lam{0.0, 0.0, 0.0};
      lam[c] = 1.0;
      for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) {
          const double value = weight * cr_value(a / 2, lam) * cr_value(b / 2, lam) * omega[a].dot(omega[b]);
          trips.emplace_back(global_dof(mesh, f, a), global_dof(mesh, f, b), value);
        }
    }
  }
  SparseMatrix K(m, m);
  K.setFromTriplets(trips.begin(), trips.end());
  return K;
}

MatrixComparison compare_matrices(const SparseMatrix& a, const SparseMatrix& b, double floor) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    raise(ErrorCode::DimensionMismatch, "matrices differ in shape");
  const Eigen::MatrixXd A(a), Bm(b);
  const double scale = std::max(A.cwiseAbs().maxCoeff(), Bm.cwiseAbs().maxCoeff());
  MatrixComparison r;
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      const double err = std::abs(A(i, j) - Bm(i, j));
      const double denom = std::max({std::abs(A(i, j)), std::abs(Bm(i, j)), floor * scale});
      r.max_abs_error = std::max(r.max_abs_error, err);
      if (denom > 0.0) r.max_relative_error = std::max(r.max_relative_error, err / denom);
    }
  return r;
}

}  // namespace crof
