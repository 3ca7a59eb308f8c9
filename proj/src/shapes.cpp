#include "crof/shapes.hpp"

#include "crof/subdivision.hpp"
#include "crof/surface.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace crof::shapes {

namespace {

using std::numbers::pi;

TriMesh from_lists(const std::vector<Eigen::Vector3d>& pts, const std::vector<Eigen::Vector3i>& tris) {
  Positions V(static_cast<Eigen::Index>(pts.size()), 3);
  for (std::size_t i = 0; i < pts.size(); ++i) V.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
  Triangles F(static_cast<Eigen::Index>(tris.size()), 3);
  for (std::size_t i = 0; i < tris.size(); ++i) F.row(static_cast<Eigen::Index>(i)) = tris[i].transpose();
  return TriMesh::build(std::move(V), std::move(F));
}

// Triangulates the strip between two closed CCW rings of indices whose
// polar angles are given; appends CCW triangles.
void zip_rings(const std::vector<int>& inner, const std::vector<double>& inner_angle,
               const std::vector<int>& outer, const std::vector<double>& outer_angle,
               std::vector<Eigen::Vector3i>& tris) {
  const std::size_t m = inner.size();
  const std::size_t n = outer.size();
  std::size_t i = 0, j = 0;
  auto unwrap = [](const std::vector<double>& a, std::size_t k) {
    const std::size_t size = a.size();
    return a[k % size] + 2.0 * pi * static_cast<double>(k / size);
  };
  while (i < m || j < n) {
    const bool advance_outer =
        i == m || (j < n && unwrap(outer_angle, j + 1) <= unwrap(inner_angle, i + 1));
    if (advance_outer) {
      tris.emplace_back(inner[i % m], outer[j % n], outer[(j + 1) % n]);
      ++j;
    } else {
      tris.emplace_back(inner[i % m], outer[j % n], inner[(i + 1) % m]);
      ++i;
    }
  }
}

Triangles grid_faces(int nx, int ny, const std::vector<char>& flip) {
  Triangles F(2 * nx * ny, 3);
  int t = 0;
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      if (flip[j * nx + i]) {
        F.row(t++) << a, b, d;
        F.row(t++) << b, c, d;
      } else {
        F.row(t++) << a, b, c;
        F.row(t++) << a, c, d;
      }
    }
  }
  return F;
}

Positions grid_positions(int nx, int ny, double x0, double x1, double y0, double y1) {
  Positions V((nx + 1) * (ny + 1), 3);
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      V.row(j * (nx + 1) + i) << x0 + (x1 - x0) * i / nx, y0 + (y1 - y0) * j / ny, 0.0;
  return V;
}

void torus_connectivity(int nu, int nv, Triangles& F) {
  F.resize(2 * nu * nv, 3);
  int t = 0;
  auto id = [nu, nv](int i, int j) { return ((j + nv) % nv) * nu + ((i + nu) % nu); };
  for (int j = 0; j < nv; ++j) {
    for (int i = 0; i < nu; ++i) {
      F.row(t++) << id(i, j), id(i + 1, j), id(i + 1, j + 1);
      F.row(t++) << id(i, j), id(i + 1, j + 1), id(i, j + 1);
    }
  }
}

}  // namespace

TriMesh tetrahedron() {
  const double s = 1.0 / (2.0 * std::sqrt(2.0));
  std::vector<Eigen::Vector3d> pts{{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
  std::vector<Eigen::Vector3i> tris{{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
  return from_lists(pts, tris);
}

TriMesh icosahedron() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> pts{{-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0},
                                   {0, -1, phi}, {0, 1, phi},  {0, -1, -phi}, {0, 1, -phi},
                                   {phi, 0, -1}, {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& p : pts) p.normalize();
  std::vector<Eigen::Vector3i> tris{{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                    {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                    {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                    {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  return from_lists(pts, tris);
}

TriMesh icosphere(int level, double radius) {
  const SmoothSurface sphere = SmoothSurface::sphere(Eigen::Vector3d::Zero(), radius);
  TriMesh mesh = project_to_surface(icosahedron(), sphere);
  for (int k = 0; k < level; ++k)
    mesh = project_to_surface(loop_subdivide(mesh, BoundaryRule::Fixed).mesh, sphere);
  return mesh;
}

TriMesh grid(int nx, int ny, double x0, double x1, double y0, double y1) {
  const std::vector<char> flip(static_cast<std::size_t>(nx) * ny, 0);
  return TriMesh::build(grid_positions(nx, ny, x0, x1, y0, y1), grid_faces(nx, ny, flip));
}

TriMesh jittered_grid(int nx, int ny, double jitter, std::uint64_t seed, double x0, double x1,
                      double y0, double y1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  Positions V = grid_positions(nx, ny, x0, x1, y0, y1);
  const double hx = (x1 - x0) / nx, hy = (y1 - y0) / ny;
  for (int j = 1; j < ny; ++j) {
    for (int i = 1; i < nx; ++i) {
      V(j * (nx + 1) + i, 0) += jitter * hx * unit(rng);
      V(j * (nx + 1) + i, 1) += jitter * hy * unit(rng);
    }
  }
  std::vector<char> flip(static_cast<std::size_t>(nx) * ny);
  for (auto& f : flip) f = static_cast<char>(coin(rng));
  return TriMesh::build(std::move(V), grid_faces(nx, ny, flip));
}

TriMesh disk(int rings, double radius) {
  std::vector<Eigen::Vector3d> pts{{0.0, 0.0, 0.0}};
  std::vector<Eigen::Vector3i> tris;
  std::vector<int> prev{0};
  std::vector<double> prev_angle{0.0};
  for (int k = 1; k <= rings; ++k) {
    const double r = radius * k / rings;
    const int count = 6 * k;
    const double offset = (k % 2) * pi / count;
    std::vector<int> ring;
    std::vector<double> angle;
    for (int j = 0; j < count; ++j) {
      const double a = offset + 2.0 * pi * j / count;
      ring.push_back(static_cast<int>(pts.size()));
      angle.push_back(a);
      pts.emplace_back(r * std::cos(a), r * std::sin(a), 0.0);
    }
    if (k == 1) {
      for (int j = 0; j < count; ++j) tris.emplace_back(0, ring[j], ring[(j + 1) % count]);
    } else {
      zip_rings(prev, prev_angle, ring, angle, tris);
    }
    prev = std::move(ring);
    prev_angle = std::move(angle);
  }
  return from_lists(pts, tris);
}

TriMesh annulus(int rings, double inner_radius, double outer_radius, int inner_segments) {
  std::vector<Eigen::Vector3d> pts;
  std::vector<Eigen::Vector3i> tris;
  std::vector<int> prev;
  std::vector<double> prev_angle;
  for (int k = 0; k <= rings; ++k) {
    const double r = inner_radius + (outer_radius - inner_radius) * k / rings;
    const int count = static_cast<int>(std::lround(inner_segments * r / inner_radius));
    const double offset = (k % 2) * pi / count;
    std::vector<int> ring;
    std::vector<double> angle;
    for (int j = 0; j < count; ++j) {
      const double a = offset + 2.0 * pi * j / count;
      ring.push_back(static_cast<int>(pts.size()));
      angle.push_back(a);
      pts.emplace_back(r * std::cos(a), r * std::sin(a), 0.0);
    }
    if (k > 0) zip_rings(prev, prev_angle, ring, angle, tris);
    prev = std::move(ring);
    prev_angle = std::move(angle);
  }
  return from_lists(pts, tris);
}

TriMesh cone_fan(int sectors, double tip_angle, double leg) {
  // Rim points on a regular polygon in z = 0 whose side equals the base of
  // an isosceles triangle with the requested apex angle.
  const double chord = 2.0 * leg * std::sin(0.5 * tip_angle);
  const double rim_radius = chord / (2.0 * std::sin(pi / sectors));
  const double height = std::sqrt(std::max(0.0, leg * leg - rim_radius * rim_radius));
  std::vector<Eigen::Vector3d> pts{{0.0, 0.0, height}};
  std::vector<Eigen::Vector3i> tris;
  for (int j = 0; j < sectors; ++j) {
    const double a = 2.0 * pi * j / sectors;
    pts.emplace_back(rim_radius * std::cos(a), rim_radius * std::sin(a), 0.0);
  }
  for (int j = 0; j < sectors; ++j) tris.emplace_back(0, 1 + j, 1 + (j + 1) % sectors);
  return from_lists(pts, tris);
}

TriMesh torus(int nu, int nv, double major_radius, double minor_radius) {
  Positions V(nu * nv, 3);
  for (int j = 0; j < nv; ++j) {
    const double v = 2.0 * pi * j / nv;
    for (int i = 0; i < nu; ++i) {
      const double u = 2.0 * pi * i / nu;
      const double rho = major_radius + minor_radius * std::cos(v);
      V.row(j * nu + i) << rho * std::cos(u), rho * std::sin(u), minor_radius * std::sin(v);
    }
  }
  Triangles F;
  torus_connectivity(nu, nv, F);
  return TriMesh::build(std::move(V), std::move(F));
}

IntrinsicMesh flat_torus(int nu, int nv, double a, double b) {
  IntrinsicMesh out{torus(nu, nv, 2.0, 0.75), {}};
  const auto& E = out.mesh.edges();
  out.edge_lengths.resize(out.mesh.edge_count());
  for (int e = 0; e < out.mesh.edge_count(); ++e) {
    const int p = E(e, 0), q = E(e, 1);
    auto wrap = [](int d, int n) {
      d = ((d % n) + n) % n;
      return d > n / 2 ? d - n : d;
    };
    const int di = wrap(q % nu - p % nu, nu);
    const int dj = wrap(q / nu - p / nu, nv);
    out.edge_lengths[e] = std::hypot(di * a, dj * b);
  }
  return out;
}

}  // namespace crof::shapes
