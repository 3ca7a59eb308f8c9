#pragma once

#include "crof/mesh.hpp"

#include <Eigen/Core>

#include <map>
#include <string>
#include <string_view>
#include <utility>

namespace crof {

// Bivariate polynomial sum c_ij x^i y^j with analytic partial derivatives.
class Polynomial2 {
 public:
  Polynomial2() = default;
  explicit Polynomial2(std::map<std::pair<int, int>, double> terms);

  // Parses e.g. "x^2", "0.5*x^2 + y^2 - 0.1*x*y", "1 + 2x - y". Monomials up
  // to total degree 4. Throws ParseError.
  static Polynomial2 parse(std::string_view text);

  double operator()(double x, double y) const { return eval(0, 0, x, y); }
  // Partial derivative d^(dx+dy) / dx^dx dy^dy evaluated at (x, y).
  double eval(int dx, int dy, double x, double y) const;

  const std::map<std::pair<int, int>, double>& terms() const { return terms_; }
  std::string to_string() const;

 private:
  std::map<std::pair<int, int>, double> terms_;
};

struct MongeDerivatives {
  double z, zx, zy, zxx, zxy, zyy;
};

// Analytic surface used for projection during refinement and as the smooth
// reference for forward-energy experiments.
class SmoothSurface {
 public:
  enum class Kind { Sphere, Ellipsoid, Monge };

  static SmoothSurface sphere(const Eigen::Vector3d& center, double radius);
  static SmoothSurface ellipsoid(const Eigen::Vector3d& semi_axes);
  static SmoothSurface monge(Polynomial2 height);

  // "sphere:<r>", "ellipsoid:<a>,<b>,<c>", "monge:<polynomial>".
  static SmoothSurface parse(std::string_view spec);

  Kind kind() const { return kind_; }
  const Polynomial2& height() const { return height_; }
  double radius() const { return radius_; }
  const Eigen::Vector3d& center() const { return center_; }
  const Eigen::Vector3d& semi_axes() const { return axes_; }

  // Closest point (sphere, ellipsoid) or vertical snap onto the graph
  // (Monge). Throws ProjectionDiverged if the ellipsoid iteration fails.
  Eigen::Vector3d project(const Eigen::Vector3d& p) const;

  // Distance-like residual: |‖p−c‖−r|, |implicit ellipsoid value|, or
  // |z − h(x,y)|.
  double residual(const Eigen::Vector3d& p) const;

  MongeDerivatives monge_at(double x, double y) const;

 private:
  Kind kind_ = Kind::Sphere;
  Eigen::Vector3d center_ = Eigen::Vector3d::Zero();
  double radius_ = 1.0;
  Eigen::Vector3d axes_ = Eigen::Vector3d::Ones();
  Polynomial2 height_;
};

TriMesh project_to_surface(const TriMesh& mesh, const SmoothSurface& surface);

// Max surface residual over all vertices.
double max_surface_residual(const TriMesh& mesh, const SmoothSurface& surface);

}  // namespace crof
