#pragma once

#include <functional>
#include <string>

#include "sdfhoi/core/rng.hpp"
#include "sdfhoi/core/types.hpp"

namespace sdfhoi {

// Triangle mesh, vertices in mm. Faces are CCW when viewed from outside
// (outward normals) for all meshes produced here.
struct TriMesh {
  MatXd V;   // n x 3
  MatX3i F;  // m x 3

  Eigen::Index vertex_count() const { return V.rows(); }
  Eigen::Index face_count() const { return F.rows(); }
};

Box3d mesh_bounds(const TriMesh& m);
double surface_area(const TriMesh& m);

// Closed 2-manifold test: every undirected edge is shared by exactly two
// faces with opposite orientation, and no face is degenerate.
bool is_watertight(const TriMesh& m, std::string* reason = nullptr);

TriMesh transformed(const TriMesh& m, const Mat3d& R, const Vec3d& t);

// Area-weighted uniform surface samples.
MatXd sample_surface(const TriMesh& m, int count, Rng& rng);

// Primitive objects, centered at the origin, axis along +z, welded and
// watertight. Triangle counts land in the low hundreds at the default
// tessellation arguments.
TriMesh make_box(const Vec3d& extents, int subdiv = 5);
TriMesh make_cylinder(double radius, double height, int segments = 64);
TriMesh make_capped_can(double radius, double height, int segments = 20,
                        int cap_bands = 3);

// Axis-angle helpers. canonicalize_axis_angle returns the representation of
// the same rotation with norm <= pi.
Mat3d axis_angle_to_matrix(const Vec3d& r);
Vec3d canonicalize_axis_angle(const Vec3d& r);
double geodesic_angle(const Vec3d& r1, const Vec3d& r2);

MatXd box_corners(const Box3d& b);  // 8 x 3

// Isosurface extraction of field == 0 over a regular grid covering `bounds`
// with the given cell size. Shared edge vertices are welded, so the result is
// watertight whenever the zero level set stays inside the grid. Triangles are
// oriented with outward normals for fields that are negative inside.
TriMesh marching_cubes(const std::function<double(const Vec3d&)>& field,
                       const Box3d& bounds, double cell_size);

}  // namespace sdfhoi
