#pragma once

#include <Eigen/Core>

#include <array>
#include <vector>

namespace crof {

// Quadrature on the reference triangle in barycentric coordinates. Weights
// sum to one, so integrals are sum(w * g) * area.
struct TriangleRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int degree = 0;
};

// Symmetric 6-point rule, exact for polynomials of degree 4.
const TriangleRule& triangle_rule_degree4();

// Collapsed (Duffy) 5 x 5 Gauss-Legendre product rule, exact through
// degree 8; used as the higher-order self-check.
const TriangleRule& triangle_rule_degree7();

// n-point Gauss-Legendre nodes and weights on [-1, 1] (Golub-Welsch).
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

}  // namespace crof
