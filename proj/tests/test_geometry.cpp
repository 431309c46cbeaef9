#include <doctest.h>

#include "sdfhoi/core/rng.hpp"
#include "sdfhoi/geometry/mesh.hpp"
#include "sdfhoi/geometry/sdf.hpp"

using namespace sdfhoi;

TEST_CASE("primitive meshes are watertight with tri counts in range") {
  std::string why;
  const TriMesh box = make_box(Vec3d(60, 80, 50));
  CHECK(is_watertight(box, &why));
  CHECK(box.face_count() >= 200);
  CHECK(box.face_count() <= 500);

  const TriMesh cyl = make_cylinder(30, 90);
  CHECK(is_watertight(cyl, &why));
  CHECK(cyl.face_count() >= 200);
  CHECK(cyl.face_count() <= 500);

  const TriMesh can = make_capped_can(25, 60);
  CHECK(is_watertight(can, &why));
  CHECK(can.face_count() >= 200);
  CHECK(can.face_count() <= 500);
}

TEST_CASE("primitives have outward orientation (winding ~1 inside, ~0 outside)") {
  for (const TriMesh& m : {make_box(Vec3d(60, 60, 60)), make_cylinder(30, 80),
                           make_capped_can(25, 60)}) {
    const MeshSdf sdf(m);
    CHECK(sdf.winding_number(Vec3d(0, 0, 0)) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(sdf.winding_number(Vec3d(500, 0, 0)) == doctest::Approx(0.0).epsilon(1e-6));
  }
}

TEST_CASE("box mesh dimensions and sdf sanity") {
  const TriMesh box = make_box(Vec3d(60, 80, 50));
  const Box3d b = mesh_bounds(box);
  CHECK(b.sizes().isApprox(Vec3d(60, 80, 50), 1e-12));
  const MeshSdf sdf(box);
  // exact values for points facing a box face
  CHECK(sdf(Vec3d(100, 0, 0)) == doctest::Approx(70.0).epsilon(1e-9));
  CHECK(sdf(Vec3d(0, 0, 0)) == doctest::Approx(-25.0).epsilon(1e-9));
}

TEST_CASE("marching cubes reproduces a sphere") {
  const double r = 100.0;
  auto field = [&](const Vec3d& p) { return p.norm() - r; };
  const Box3d bounds(Vec3d(-r, -r, -r), Vec3d(r, r, r));
  const TriMesh m = marching_cubes(field, bounds, 8.0);
  std::string why;
  REQUIRE(is_watertight(m, &why));
  REQUIRE(m.vertex_count() > 100);
  // every vertex close to the sphere
  for (Eigen::Index i = 0; i < m.V.rows(); ++i)
    CHECK(std::abs(m.V.row(i).norm() - r) < 0.8);
  // orientation: negative-inside field gives outward normals
  const MeshSdf sdf(m);
  CHECK(sdf(Vec3d::Zero()) < 0);
  CHECK(sdf(Vec3d(2 * r, 0, 0)) > 0);
  CHECK(sdf(Vec3d(2 * r, 0, 0)) == doctest::Approx(r).epsilon(0.01));
}

TEST_CASE("surface sampling lands on the surface, area weighted") {
  const TriMesh cyl = make_cylinder(30, 90);
  const MeshSdf sdf(cyl);
  Rng rng(11);
  const MatXd s = sample_surface(cyl, 200, rng);
  for (Eigen::Index i = 0; i < s.rows(); ++i)
    CHECK(std::abs(sdf(s.row(i).transpose())) < 1e-6);
}

TEST_CASE("axis-angle canonicalization and geodesic distance") {
  const Vec3d r(0.3, -0.2, 0.9);
  const double n = r.norm();
  const Vec3d equiv = r * (1.0 - 2.0 * std::numbers::pi / n);  // same rotation
  CHECK(geodesic_angle(r, equiv) == doctest::Approx(0.0).epsilon(1e-9));
  const Vec3d canon = canonicalize_axis_angle(equiv);
  CHECK(canon.norm() <= std::numbers::pi + 1e-12);
  CHECK(geodesic_angle(canon, r) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(canonicalize_axis_angle(Vec3d::Zero()).norm() == 0.0);
}
