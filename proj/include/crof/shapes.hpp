#pragma once

#include "crof/mesh.hpp"

#include <cstdint>

namespace crof::shapes {

// Regular tetrahedron with unit edge length, outward oriented.
TriMesh tetrahedron();

// Regular icosahedron inscribed in the unit sphere, outward oriented.
TriMesh icosahedron();

// Icosahedron refined `level` times by Loop subdivision, each level
// re-projected onto the sphere so the vertices stay inscribed.
TriMesh icosphere(int level, double radius = 1.0);

// Structured triangulation of [x0,x1] x [y0,y1] in the z = 0 plane, nx by ny
// cells, every cell split along the same diagonal (interior valence 6).
TriMesh grid(int nx, int ny, double x0 = 0.0, double x1 = 1.0, double y0 = 0.0, double y1 = 1.0);

// Like grid() but interior vertices are perturbed by up to `jitter` cell
// widths and diagonals are chosen at random.
TriMesh jittered_grid(int nx, int ny, double jitter, std::uint64_t seed, double x0 = 0.0,
                      double x1 = 1.0, double y0 = 0.0, double y1 = 1.0);

// Planar disk of the given radius built from `rings` concentric rings of
// 6k points each (1 + 3 rings (rings + 1) vertices).
TriMesh disk(int rings, double radius = 1.0);

// Planar annulus with `rings` + 1 concentric rings between the radii; ring
// point counts grow with the radius so triangles stay close to equilateral.
TriMesh annulus(int rings, double inner_radius, double outer_radius, int inner_segments);

// Fan of `sectors` isosceles triangles with legs of length `leg` around an
// apex; each apex angle equals `tip_angle`. The rim is boundary.
TriMesh cone_fan(int sectors, double tip_angle, double leg = 1.0);

// Torus of revolution (major radius R, minor radius r), nu by nv quads
// split into triangles.
TriMesh torus(int nu, int nv, double major_radius, double minor_radius);

struct IntrinsicMesh {
  TriMesh mesh;
  Eigen::VectorXd edge_lengths;
};

// Same connectivity as torus(), with edge lengths of a periodic planar grid
// of cell size a by b. Intrinsically flat: every angle defect is zero.
IntrinsicMesh flat_torus(int nu, int nv, double a, double b);

}  // namespace crof::shapes
