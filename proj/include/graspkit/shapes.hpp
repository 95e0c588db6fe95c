#pragma once

#include "graspkit/geometry.hpp"

namespace graspkit {

// All generators below produce closed, consistently oriented meshes
// (TriangleMesh::is_watertight() holds).

// Axis-aligned box spanning [lo, hi], each face tessellated into an
// n x n grid. n = 1 gives the plain 8-vertex box.
TriangleMesh make_box_mesh(const Vec3& lo, const Vec3& hi, int divisions = 1);

// Icosphere centered at the origin. subdivisions = 0 is the icosahedron
// (12 vertices); each level quadruples the face count.
TriangleMesh make_icosphere(double radius, int subdivisions = 2);

// Closed cylinder with axis along +z, centered at the origin.
TriangleMesh make_cylinder_mesh(double radius, double height, int segments = 24,
                                int rings = 2);

// Closed tube through the given ring centers with per-ring radii, capped
// with apex vertices at both ends. `u` and `v` span the ring plane at each
// center; rings have `segments` vertices each. Requires >= 2 rings.
TriangleMesh make_capped_tube(const std::vector<Vec3>& centers,
                              const std::vector<double>& radii,
                              const std::vector<Vec3>& ring_u,
                              const std::vector<Vec3>& ring_v, int segments);

// Ellipsoid centered at `center` with semi-axes `radii`, as a UV grid of
// `rings` latitude rings with `segments` points each plus two poles.
TriangleMesh make_uv_ellipsoid(const Vec3& center, const Vec3& radii, int rings,
                               int segments);

}  // namespace graspkit
