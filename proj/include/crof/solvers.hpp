#pragma once

#include "crof/curvature.hpp"
#include "crof/energy.hpp"

#include <Eigen/Core>

#include <utility>
#include <vector>

namespace crof {

// Fixed vertex values for interpolation; indices must be unique and valid.
class Constraints {
 public:
  Constraints() = default;
  explicit Constraints(std::vector<std::pair<int, double>> fixed) : fixed_(std::move(fixed)) {}

  void add(int vertex, double value) { fixed_.emplace_back(vertex, value); }
  const std::vector<std::pair<int, double>>& entries() const { return fixed_; }
  std::size_t size() const { return fixed_.size(); }

  // Throws InvalidIndex (out of range) or InvalidArgument (duplicates).
  void validate(int vertex_count) const;

 private:
  std::vector<std::pair<int, double>> fixed_;
};

// argmin 1/2 u^T Q u subject to the fixed values, by eliminating the fixed
// variables: Q_ff u_f = -Q_fc u_c. Throws InsufficientConstraints when the
// reduced system is singular, i.e. the smallest eigenvalue of (Q_ff, B_ff)
// is below 1e-12 * op.scale() (null space not pinned), and SolveFailure when
// the solve fails.
Eigen::VectorXd min_with_fixed(const EnergyOperator& op, const Constraints& constraints);

// argmin 1/2 u^T Q u + alpha/2 (u - f)^T B (u - f), i.e. (Q + alpha B) u = alpha B f.
Eigen::VectorXd smooth(const EnergyOperator& op, const Eigen::VectorXd& f, double alpha);

struct FlowResult {
  TriMesh mesh;
  // Angle defects of the input mesh followed by those after every step.
  std::vector<Eigen::VectorXd> defects;
};

// Repeats smooth() on the vertex coordinates, rebuilding the operator on the
// current surface at every step. Throws DegenerateFace if a step collapses
// a triangle.
FlowResult fairing_flow(const TriMesh& mesh, EnergyKind kind, double alpha, int steps);

struct EigenResult {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // n x k, B-orthonormal columns
};

struct EigenOptions {
  int dense_limit = 3000;  // dense solver up to this many vertices
  int max_iterations = 1000;
  double residual_tolerance = 1e-8;  // relative to max|Q| * |x|
};

// k smallest eigenpairs of Q x = mu B x. Throws InvalidArgument for bad k
// and NoConvergence when the iterative solver runs out of iterations.
EigenResult smallest_eigs(const EnergyOperator& op, int k, const EigenOptions& options = {});

// Same for arbitrary symmetric Q and diagonal positive B.
EigenResult smallest_eigs(const SparseMatrix& Q, const SparseMatrix& B, int k,
                          const EigenOptions& options = {});

// Number of eigenvalues below 1e-8 * (max|Q| / max B).
int kernel_dimension(const EigenResult& result, double scale);

}  // namespace crof
