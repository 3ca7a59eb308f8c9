#include "crof/convergence.hpp"

#include "crof/error.hpp"
#include "crof/io.hpp"
#include "crof/shapes.hpp"

#include <cmath>
#include <fstream>
#include <random>

namespace crof {

ParamMesh param_grid(int nx, int ny, double x0, double x1, double y0, double y1) {
  const TriMesh g = shapes::grid(nx, ny, x0, x1, y0, y1);
  ParamMesh p;
  p.points = g.vertices().leftCols<2>();
  p.faces = g.faces();
  return p;
}

double monge_energy_density(const SmoothSurface& surface, const Polynomial2& f, double x, double y) {
  const MongeDerivatives z = surface.monge_at(x, y);
  const double fx = f.eval(1, 0, x, y), fy = f.eval(0, 1, x, y);
  const double w2 = 1.0 + z.zx * z.zx + z.zy * z.zy;

  Eigen::Matrix2d g_inv;
  g_inv << 1.0 + z.zy * z.zy, -z.zx * z.zy, -z.zx * z.zy, 1.0 + z.zx * z.zx;
  g_inv /= w2;

  // Covariant Hessian f_ij - Γ^k_ij f_k with Γ^k_ij = z_k z_ij / w2.
  const double grad_dot = (z.zx * fx + z.zy * fy) / w2;
  Eigen::Matrix2d H;
  H << f.eval(2, 0, x, y) - grad_dot * z.zxx, f.eval(1, 1, x, y) - grad_dot * z.zxy,
      f.eval(1, 1, x, y) - grad_dot * z.zxy, f.eval(0, 2, x, y) - grad_dot * z.zyy;

  const double hessian_sq = (g_inv * H * g_inv * H).trace();
  const double gauss = (z.zxx * z.zyy - z.zxy * z.zxy) / (w2 * w2);
  const Eigen::Vector2d df(fx, fy);
  const double df_sq = df.dot(g_inv * df);
  return hessian_sq + gauss * df_sq;
}

double smooth_energy_monge(const SmoothSurface& surface, const Polynomial2& f, const ParamMesh& domain,
                           const TriangleRule& rule) {
  if (surface.kind() != SmoothSurface::Kind::Monge)
    raise(ErrorCode::InvalidArgument, "smooth reference energy needs a Monge patch");
  double total = 0.0;
  for (Eigen::Index t = 0; t < domain.faces.rows(); ++t) {
    const Eigen::Vector2d a = domain.points.row(domain.faces(t, 0)).transpose();
    const Eigen::Vector2d b = domain.points.row(domain.faces(t, 1)).transpose();
    const Eigen::Vector2d c = domain.points.row(domain.faces(t, 2)).transpose();
    const double area = 0.5 * std::abs((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& lam = rule.points[q];
      const Eigen::Vector2d p = lam[0] * a + lam[1] * b + lam[2] * c;
      const MongeDerivatives z = surface.monge_at(p.x(), p.y());
      const double area_element = std::sqrt(1.0 + z.zx * z.zx + z.zy * z.zy);
      sum += rule.weights[q] * monge_energy_density(surface, f, p.x(), p.y()) * area_element;
    }
    total += sum * area;
  }
  return 0.5 * total;
}

std::string_view to_string(RefinementStrategy strategy) {
  return strategy == RefinementStrategy::Loop ? "loop" : "random-split";
}

Subdivision random_split(const TriMesh& coarse, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  const int nv = coarse.vertex_count();
  const int nf = coarse.face_count();
  std::vector<Eigen::Triplet<double>> trips;
  for (int v = 0; v < nv; ++v) trips.emplace_back(v, v, 1.0);
  Triangles faces(3 * nf, 3);
  for (int f = 0; f < nf; ++f) {
    double w[3] = {unit(rng), unit(rng), unit(rng)};
    const double s = w[0] + w[1] + w[2];
    const int center = nv + f;
    for (int c = 0; c < 3; ++c) trips.emplace_back(center, coarse.faces()(f, c), w[c] / s);
    const int a = coarse.faces()(f, 0), b = coarse.faces()(f, 1), c = coarse.faces()(f, 2);
    faces.row(3 * f + 0) << a, b, center;
    faces.row(3 * f + 1) << b, c, center;
    faces.row(3 * f + 2) << c, a, center;
  }
  Eigen::SparseMatrix<double> S(nv + nf, nv);
  S.setFromTriplets(trips.begin(), trips.end());
  Positions V = S * coarse.vertices();
  return {TriMesh::build(std::move(V), std::move(faces)), std::move(S)};
}

bool ConvergenceRecord::monotone_decreasing() const {
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (!(levels[i].error < levels[i - 1].error)) return false;
  return true;
}

double fit_loglog_slope(const std::vector<ConvergenceLevel>& levels) {
  if (levels.size() < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(levels.size());
  for (const auto& l : levels) {
    const double x = std::log(l.h), y = std::log(l.error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void save_convergence_csv(const ConvergenceRecord& record, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorCode::IoError, "cannot write '" + path + "'");
  out << "level,vertices,h,error\n";
  for (const auto& l : record.levels)
    out << l.level << ',' << l.vertices << ',' << io::format_double(l.h) << ',' << io::format_double(l.error)
        << '\n';
  out.flush();
  if (!out) raise(ErrorCode::IoError, "write failed for '" + path + "'");
}

ConvergenceRecord forward_energy_study(const ForwardProblem& problem) {
  if (problem.levels < 2) raise(ErrorCode::InvalidArgument, "a study needs at least two levels");
  ConvergenceRecord record;
  record.problem = "forward-energy";
  record.error_kind = "relative |E_h - E| / |E|";
  record.strategy = "loop-fixed-boundary+projection";

  const ParamMesh domain = param_grid(problem.reference_cells, problem.reference_cells, problem.x0,
                                      problem.x1, problem.y0, problem.y1);
  const double exact4 = smooth_energy_monge(problem.surface, problem.f, domain, triangle_rule_degree4());
  const double exact7 = smooth_energy_monge(problem.surface, problem.f, domain, triangle_rule_degree7());
  record.reference = exact7;
  record.reference_agreement = std::abs(exact4 - exact7) / std::abs(exact7);

  TriMesh mesh = project_to_surface(
      shapes::grid(problem.base_cells, problem.base_cells, problem.x0, problem.x1, problem.y0, problem.y1),
      problem.surface);
  for (int level = 0; level < problem.levels; ++level) {
    if (level > 0) mesh = project_to_surface(loop_subdivide(mesh, BoundaryRule::Fixed).mesh, problem.surface);
    const EnergyOperator op = build_energy(mesh, problem.energy);
    Eigen::VectorXd fv(mesh.vertex_count());
    for (int v = 0; v < mesh.vertex_count(); ++v) fv[v] = problem.f(mesh.vertices()(v, 0), mesh.vertices()(v, 1));
    const double eh = energy_value(op, fv);
    record.levels.push_back({level, mesh.vertex_count(), geometry(mesh).mean_edge_length,
                             std::abs(eh - record.reference) / std::abs(record.reference)});
  }
  record.slope = fit_loglog_slope(record.levels);
  return record;
}

ConvergenceRecord sphere_eigenvalue_study(const SphereEigenProblem& problem) {
  ConvergenceRecord record;
  record.problem = "sphere-eigenvalues";
  record.error_kind = "max relative error of eigenvalues 2-4 against 4";
  record.strategy = "loop+projection onto the unit sphere";
  record.reference = 4.0;
  for (int level = problem.first_level; level <= problem.last_level; ++level) {
    const TriMesh mesh = shapes::icosphere(level);
    const EnergyOperator op = build_energy(mesh, problem.energy);
    const EigenResult eig = smallest_eigs(op, 4);
    double err = 0.0;
    for (int i = 1; i < 4; ++i) err = std::max(err, std::abs(eig.values[i] - 4.0) / 4.0);
    record.levels.push_back({level, mesh.vertex_count(), geometry(mesh).mean_edge_length, err});
  }
  record.slope = fit_loglog_slope(record.levels);
  return record;
}

ConvergenceRecord self_convergence_study(const SelfConvergenceProblem& problem) {
  if (problem.levels < 2) raise(ErrorCode::InvalidArgument, "a study needs at least two refinements");
  ConvergenceRecord record;
  record.problem = "interpolation-self-convergence";
  record.error_kind = "L2 error against the finest level";
  record.strategy = std::string(to_string(problem.strategy)) +
                    (problem.boundary == BoundaryRule::Fixed ? "-fixed-boundary" : "-smooth-boundary") +
                    ", coarse solutions prolongated by the refinement operator";
  problem.constraints.validate(problem.base.vertex_count());

  std::vector<TriMesh> meshes{problem.base};
  std::vector<SparseMatrix> prolong;
  for (int level = 1; level <= problem.levels; ++level) {
    Subdivision sub = problem.strategy == RefinementStrategy::Loop
                          ? loop_subdivide(meshes.back(), problem.boundary)
                          : random_split(meshes.back(), problem.seed + static_cast<std::uint64_t>(level));
    TriMesh next = problem.surface ? project_to_surface(sub.mesh, *problem.surface) : std::move(sub.mesh);
    prolong.push_back(std::move(sub.prolongation));
    meshes.push_back(std::move(next));
  }

  std::vector<Eigen::VectorXd> solutions;
  for (const TriMesh& mesh : meshes)
    solutions.push_back(min_with_fixed(build_energy(mesh, problem.energy), problem.constraints));

  const Eigen::VectorXd& reference = solutions.back();
  const SparseMatrix B = assemble_B(meshes.back(), geometry(meshes.back()));
  for (int level = 0; level < problem.levels; ++level) {
    Eigen::VectorXd u = solutions[static_cast<std::size_t>(level)];
    for (int k = level; k < problem.levels; ++k) u = prolong[static_cast<std::size_t>(k)] * u;
    const Eigen::VectorXd diff = u - reference;
    const double err = std::sqrt(diff.dot(B * diff));
    const TriMesh& mesh = meshes[static_cast<std::size_t>(level)];
    record.levels.push_back({level, mesh.vertex_count(), geometry(mesh).mean_edge_length, err});
  }
  record.slope = fit_loglog_slope(record.levels);
  return record;
}

}  // namespace crof
