#include "crof/solvers.hpp"

#include "crof/error.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace crof {

namespace {

constexpr double kSingularRelative = 1e-12;
constexpr double kKernelRelative = 1e-8;

// Smallest generalized eigenvalue of (A, diag(b)) by inverse iteration on an
// already factorized A.
template <class Solver>
double smallest_generalized_eigenvalue(const SparseMatrix& A, const Eigen::VectorXd& b, const Solver& solver) {
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd x(A.rows());
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = normal(rng);
  x /= std::sqrt(x.dot(b.cwiseProduct(x)));
  double estimate = 0.0;
  for (int it = 0; it < 12; ++it) {
    const Eigen::VectorXd y = solver.solve(b.cwiseProduct(x));
    const double n = std::sqrt(y.dot(b.cwiseProduct(y)));
    if (!std::isfinite(n) || n == 0.0) return 0.0;
    x = y / n;
    const double rq = x.dot(A * x);
    if (it > 0 && std::abs(rq - estimate) <= 1e-6 * std::abs(rq)) return rq;
    estimate = rq;
  }
  return estimate;
}

}  // namespace

void Constraints::validate(int vertex_count) const {
  std::vector<char> seen(static_cast<std::size_t>(std::max(vertex_count, 0)), 0);
  for (const auto& [v, value] : fixed_) {
    if (v < 0 || v >= vertex_count)
      raise(ErrorCode::InvalidIndex, "constraint vertex " + std::to_string(v) + " out of range");
    if (seen[static_cast<std::size_t>(v)]++)
      raise(ErrorCode::InvalidArgument, "vertex " + std::to_string(v) + " constrained twice");
    if (!std::isfinite(value)) raise(ErrorCode::InvalidArgument, "non-finite constraint value");
  }
}

Eigen::VectorXd min_with_fixed(const EnergyOperator& op, const Constraints& constraints) {
  const int n = op.size();
  constraints.validate(n);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  std::vector<int> slot(static_cast<std::size_t>(n), -1);  // free index, or -1 when fixed
  for (const auto& [v, value] : constraints.entries()) u[v] = value;
  std::vector<char> fixed(static_cast<std::size_t>(n), 0);
  for (const auto& [v, value] : constraints.entries()) fixed[static_cast<std::size_t>(v)] = 1;
  std::vector<int> free_vertices;
  for (int v = 0; v < n; ++v)
    if (!fixed[static_cast<std::size_t>(v)]) {
      slot[static_cast<std::size_t>(v)] = static_cast<int>(free_vertices.size());
      free_vertices.push_back(v);
    }
  const int nf = static_cast<int>(free_vertices.size());
  if (nf == 0) return u;

  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf);
  const SparseMatrix& Q = op.Q();
  for (Eigen::Index col = 0; col < Q.outerSize(); ++col) {
    const int cs = slot[static_cast<std::size_t>(col)];
    for (SparseMatrix::InnerIterator it(Q, col); it; ++it) {
      const int rs = slot[static_cast<std::size_t>(it.row())];
      if (rs < 0) continue;
      if (cs >= 0) trips.emplace_back(rs, cs, it.value());
      else rhs[rs] -= it.value() * u[col];
    }
  }
  SparseMatrix Qff(nf, nf);
  Qff.setFromTriplets(trips.begin(), trips.end());

  Eigen::SimplicialLDLT<SparseMatrix> solver(Qff);
  if (solver.info() != Eigen::Success)
    raise(ErrorCode::InsufficientConstraints, "reduced system could not be factorized");
  Eigen::VectorXd bff(nf);
  for (int i = 0; i < nf; ++i) {
    const int v = free_vertices[static_cast<std::size_t>(i)];
    bff[i] = op.B().coeff(v, v);
  }
  const double lambda = smallest_generalized_eigenvalue(Qff, bff, solver);
  if (!(std::abs(lambda) > kSingularRelative * op.scale()))
    raise(ErrorCode::InsufficientConstraints,
          std::to_string(constraints.size()) + " constraints leave a null space of the energy free");
  const Eigen::VectorXd uf = solver.solve(rhs);
  if (solver.info() != Eigen::Success || !uf.allFinite())
    raise(ErrorCode::SolveFailure, "reduced solve failed");
  for (int i = 0; i < nf; ++i) u[free_vertices[static_cast<std::size_t>(i)]] = uf[i];
  return u;
}

Eigen::VectorXd smooth(const EnergyOperator& op, const Eigen::VectorXd& f, double alpha) {
  if (f.size() != op.size()) raise(ErrorCode::DimensionMismatch, "field length differs from vertex count");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) raise(ErrorCode::InvalidArgument, "alpha must be positive");
  const SparseMatrix A = op.Q() + alpha * op.B();
  Eigen::SimplicialLDLT<SparseMatrix> solver(A);
  if (solver.info() != Eigen::Success) raise(ErrorCode::SolveFailure, "factorization of Q + alpha B failed");
  Eigen::VectorXd u = solver.solve(alpha * (op.B() * f));
  if (solver.info() != Eigen::Success || !u.allFinite()) raise(ErrorCode::SolveFailure, "smoothing solve failed");
  return u;
}

FlowResult fairing_flow(const TriMesh& mesh, EnergyKind kind, double alpha, int steps) {
  if (steps < 1) raise(ErrorCode::InvalidArgument, "steps must be at least 1");
  if (!(alpha > 0.0)) raise(ErrorCode::InvalidArgument, "alpha must be positive");
  FlowResult result{mesh, {}};
  result.defects.push_back(angle_defects(mesh, geometry(mesh)).defects);
  for (int step = 0; step < steps; ++step) {
    const EnergyOperator op = build_energy(result.mesh, kind);
    const SparseMatrix A = op.Q() + alpha * op.B();
    Eigen::SimplicialLDLT<SparseMatrix> solver(A);
    if (solver.info() != Eigen::Success) raise(ErrorCode::SolveFailure, "factorization failed in flow step");
    const Eigen::MatrixXd X = result.mesh.vertices();
    const Eigen::MatrixXd rhs = alpha * (op.B() * X);
    Positions next = solver.solve(rhs);
    if (solver.info() != Eigen::Success || !next.allFinite())
      raise(ErrorCode::SolveFailure, "solve failed in flow step " + std::to_string(step + 1));
    try {
      result.mesh = result.mesh.with_vertices(std::move(next));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateFace) throw;
      raise(ErrorCode::DegenerateFace, "flow collapsed a triangle at step " + std::to_string(step + 1) +
                                           " of " + std::to_string(steps) + " (" + e.what() + ")");
    }
    result.defects.push_back(angle_defects(result.mesh, geometry(result.mesh)).defects);
  }
  return result;
}

namespace {

EigenResult dense_eigs(const SparseMatrix& Q, const Eigen::VectorXd& b, int k) {
  const Eigen::VectorXd inv_sqrt = b.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd C = inv_sqrt.asDiagonal() * Eigen::MatrixXd(Q) * inv_sqrt.asDiagonal();
  C = 0.5 * (C + C.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
  if (es.info() != Eigen::Success) raise(ErrorCode::NoConvergence, "dense eigensolver failed");
  EigenResult r;
  r.values = es.eigenvalues().head(k);
  r.vectors = inv_sqrt.asDiagonal() * es.eigenvectors().leftCols(k);
  return r;
}

// Block shift-invert subspace iteration with Rayleigh-Ritz on (Q, B).
EigenResult iterative_eigs(const SparseMatrix& Q, const Eigen::VectorXd& b, int k,
                           const EigenOptions& options) {
  const Eigen::Index n = Q.rows();
  const double qmax = max_abs(Q);
  const double shift = -kKernelRelative * qmax / b.maxCoeff();
  const SparseMatrix B = SparseMatrix(b.asDiagonal());
  const SparseMatrix A = Q - shift * B;
  Eigen::SimplicialLDLT<SparseMatrix> solver(A);
  if (solver.info() != Eigen::Success) raise(ErrorCode::SolveFailure, "shifted factorization failed");

  const int p = static_cast<int>(std::min<Eigen::Index>(n, 2 * k + 8));
  std::mt19937_64 rng(0xe16e);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd X(n, p);
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = normal(rng);

  EigenResult r;
  for (int it = 0; it < options.max_iterations; ++it) {
    Eigen::MatrixXd Y = solver.solve(b.asDiagonal() * X);
    if (solver.info() != Eigen::Success) raise(ErrorCode::SolveFailure, "shifted solve failed");
    // Orthonormalize for conditioning before the Ritz projection.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Y);
    Y = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);
    Eigen::MatrixXd Qr = Y.transpose() * (Q * Y);
    Eigen::MatrixXd Br = Y.transpose() * (b.asDiagonal() * Y);
    Qr = 0.5 * (Qr + Qr.transpose()).eval();
    Br = 0.5 * (Br + Br.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ritz(Qr, Br);
    if (ritz.info() != Eigen::Success) raise(ErrorCode::NoConvergence, "Ritz step failed");
    X = Y * ritz.eigenvectors();
    // Normalize in the B inner product.
    for (int j = 0; j < p; ++j) X.col(j) /= std::sqrt(X.col(j).dot(b.asDiagonal() * X.col(j)));

    bool converged = true;
    for (int j = 0; j < k && converged; ++j) {
      const double mu = ritz.eigenvalues()[j];
      const Eigen::VectorXd res = Q * X.col(j) - mu * (b.asDiagonal() * X.col(j));
      converged = res.norm() <= options.residual_tolerance * qmax * X.col(j).norm();
    }
    if (converged) {
      r.values = ritz.eigenvalues().head(k);
      r.vectors = X.leftCols(k);
      return r;
    }
  }
  raise(ErrorCode::NoConvergence,
        "eigensolver did not converge in " + std::to_string(options.max_iterations) + " iterations");
}

}  // namespace

EigenResult smallest_eigs(const SparseMatrix& Q, const SparseMatrix& B, int k, const EigenOptions& options) {
  const int n = static_cast<int>(Q.rows());
  if (Q.rows() != Q.cols() || B.rows() != Q.rows() || B.cols() != Q.cols())
    raise(ErrorCode::DimensionMismatch, "Q and B must be square and of equal size");
  if (k < 1 || k > n) raise(ErrorCode::InvalidArgument, "k must lie in [1, n]");
  const Eigen::VectorXd b = B.diagonal();
  if (!(b.minCoeff() > 0.0)) raise(ErrorCode::InvalidArgument, "B must be positive diagonal");
  if (n <= options.dense_limit) return dense_eigs(Q, b, k);
  return iterative_eigs(Q, b, k, options);
}

EigenResult smallest_eigs(const EnergyOperator& op, int k, const EigenOptions& options) {
  return smallest_eigs(op.Q(), op.B(), k, options);
}

int kernel_dimension(const EigenResult& result, double scale) {
  int count = 0;
  for (Eigen::Index i = 0; i < result.values.size(); ++i)
    if (result.values[i] < kKernelRelative * scale) ++count;
  return count;
}

}  // namespace crof
