#include "crof/energy.hpp"

#include "crof/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace crof {

std::string_view to_string(EnergyKind kind) {
  return kind == EnergyKind::CurvedHessian ? "curved-hessian" : "squared-laplacian";
}

EnergyKind parse_energy_kind(std::string_view text) {
  if (text == "curved-hessian" || text == "curved_hessian") return EnergyKind::CurvedHessian;
  if (text == "squared-laplacian" || text == "squared_laplacian") return EnergyKind::SquaredLaplacian;
  raise(ErrorCode::InvalidArgument, "unknown energy '" + std::string(text) + "'");
}

EnergyOperator::EnergyOperator(EnergyKind kind, std::shared_ptr<const TriMesh> mesh, SparseMatrix Q,
                               SparseMatrix B, EnergyComponents components)
    : kind_(kind), mesh_(std::move(mesh)), Q_(std::move(Q)), B_(std::move(B)),
      components_(std::move(components)) {}

double EnergyOperator::scale() const {
  const double b = max_abs(B_);
  return b > 0.0 ? max_abs(Q_) / b : 0.0;
}

double max_abs(const SparseMatrix& A) {
  double m = 0.0;
  for (Eigen::Index k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

double symmetry_residual(const SparseMatrix& A) {
  if (A.rows() != A.cols()) return INFINITY;
  const SparseMatrix At = A.transpose();
  return max_abs(A - At);
}

namespace {

SparseMatrix symmetrized(const SparseMatrix& A) {
  const SparseMatrix At = A.transpose();
  SparseMatrix S = 0.5 * (A + At);
  S.makeCompressed();
  return S;
}

}  // namespace

EnergyOperator build_curved_hessian(const TriMesh& mesh, bool include_curvature) {
  return build_curved_hessian(mesh, geometry(mesh), include_curvature);
}

EnergyOperator build_curved_hessian(const TriMesh& mesh, const GeometryCache& geom,
                                    bool include_curvature) {
  const CrofDofMap dofs(mesh);
  EnergyComponents parts;
  parts.L = assemble_L(mesh, geom, dofs);
  parts.M = assemble_M(mesh, geom, dofs);
  parts.D = assemble_D(mesh, geom, dofs);
  parts.defects = angle_defects(mesh, geom);
  parts.K = include_curvature ? assemble_K(mesh, geom, parts.defects, dofs)
                              : SparseMatrix(dofs.size(), dofs.size());

  const Eigen::VectorXd inv_mass = parts.M.diagonal().cwiseInverse();
  const SparseMatrix stiffness = parts.L + parts.K;
  const SparseMatrix weighted = inv_mass.asDiagonal() * stiffness * inv_mass.asDiagonal();
  const SparseMatrix Dt = parts.D.transpose();
  const SparseMatrix Q = Dt * (weighted * parts.D);

  return EnergyOperator(EnergyKind::CurvedHessian, std::make_shared<const TriMesh>(mesh), symmetrized(Q),
                        assemble_B(mesh, geom), std::move(parts));
}

EnergyOperator build_squared_laplacian(const TriMesh& mesh) {
  return build_squared_laplacian(mesh, geometry(mesh));
}

EnergyOperator build_squared_laplacian(const TriMesh& mesh, const GeometryCache& geom) {
  EnergyComponents parts;
  parts.cotan = assemble_cotan(mesh, geom);
  parts.defects = angle_defects(mesh, geom);
  SparseMatrix B = assemble_B(mesh, geom);
  const Eigen::VectorXd inv_mass = B.diagonal().cwiseInverse();
  const SparseMatrix Lt = parts.cotan.transpose();
  const SparseMatrix Q = Lt * (inv_mass.asDiagonal() * parts.cotan);
  return EnergyOperator(EnergyKind::SquaredLaplacian, std::make_shared<const TriMesh>(mesh), symmetrized(Q),
                        std::move(B), std::move(parts));
}

EnergyOperator build_energy(const TriMesh& mesh, EnergyKind kind) {
  return kind == EnergyKind::CurvedHessian ? build_curved_hessian(mesh) : build_squared_laplacian(mesh);
}

double energy_value(const EnergyOperator& op, const Eigen::VectorXd& u) {
  if (u.size() != op.size())
    raise(ErrorCode::DimensionMismatch,
          "field has " + std::to_string(u.size()) + " values, operator expects " + std::to_string(op.size()));
  return 0.5 * u.dot(op.Q() * u);
}

}  // namespace crof
