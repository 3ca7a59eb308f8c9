#include "crof/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace crof {

void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double beta = i / std::sqrt(4.0 * i * i - 1.0);
    J(i, i - 1) = J(i - 1, i) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  nodes = es.eigenvalues();
  weights = 2.0 * es.eigenvectors().row(0).transpose().array().square();
}

const TriangleRule& triangle_rule_degree4() {
  static const TriangleRule rule = [] {
    TriangleRule r;
    r.degree = 4;
    const double a = 0.091576213509770743460, wa = 0.10995174365532186764;
    const double b = 0.44594849091596488632, wb = 0.22338158967801146570;
    for (auto [t, w] : {std::pair{a, wa}, std::pair{b, wb}}) {
      r.points.push_back({t, t, 1.0 - 2.0 * t});
      r.points.push_back({t, 1.0 - 2.0 * t, t});
      r.points.push_back({1.0 - 2.0 * t, t, t});
      r.weights.insert(r.weights.end(), 3, w);
    }
    return r;
  }();
  return rule;
}

const TriangleRule& triangle_rule_degree7() {
  static const TriangleRule rule = [] {
    TriangleRule r;
    r.degree = 7;
    Eigen::VectorXd x, w;
    gauss_legendre(5, x, w);
    // (u, v) in the unit square -> (s, t) = (u, v (1 - u)), Jacobian (1 - u);
    // the reference triangle has area 1/2, hence the factor 2.
    for (int i = 0; i < 5; ++i) {
      const double u = 0.5 * (x[i] + 1.0);
      for (int j = 0; j < 5; ++j) {
        const double v = 0.5 * (x[j] + 1.0);
        const double s = u, t = v * (1.0 - u);
        r.points.push_back({1.0 - s - t, s, t});
        r.weights.push_back(2.0 * 0.25 * w[i] * w[j] * (1.0 - u));
      }
    }
    return r;
  }();
  return rule;
}

}  // namespace crof
