#include <doctest.h>

#include "sdfhoi/core/rng.hpp"
#include "sdfhoi/geometry/mesh.hpp"
#include "sdfhoi/geometry/sdf.hpp"
#include "sdfhoi/geometry/supervision.hpp"
#include "sdfhoi/hand/hand.hpp"

using namespace sdfhoi;

namespace {

TriMesh icosphere_like(double radius, int bands = 24) {
  // lat-long sphere via the capped-can builder with zero side height
  TriMesh m = make_capped_can(radius, 0.0, 2 * bands, bands);
  return m;
}

Vec3d rand_point(Rng& rng, double extent) {
  return {rng.uniform(-extent, extent), rng.uniform(-extent, extent),
          rng.uniform(-extent, extent)};
}

}  // namespace

TEST_CASE("sphere mesh signed distance: outside and inside") {
  const double r = 100.0;
  const TriMesh sphere = icosphere_like(r);
  const MeshSdf sdf(sphere);
  // tessellation error bound: chord sag of the band discretization
  const double tol = 1.5;
  CHECK(sdf(Vec3d(200, 0, 0)) == doctest::Approx(100.0).epsilon(tol / 100.0));
  CHECK(sdf(Vec3d(0, 0, 0)) == doctest::Approx(-100.0).epsilon(tol / 100.0));
}

TEST_CASE("accelerated query matches the all-triangles oracle") {
  Rng rng(404);
  const TriMesh meshes[3] = {make_box(Vec3d(70, 50, 90)), make_cylinder(35, 80),
                             make_capped_can(28, 55)};
  for (const auto& m : meshes) {
    const MeshSdf sdf(m);
    for (int i = 0; i < 300; ++i) {
      const Vec3d p = rand_point(rng, 150);
      const double ref = brute_force_signed_distance(p, m);
      const double got = sdf(p);
      CHECK(got == doctest::Approx(ref).epsilon(1e-9));
    }
  }
}

TEST_CASE("non-watertight mesh is rejected at construction") {
  TriMesh m = make_box(Vec3d(50, 50, 50));
  m.F.conservativeResize(m.F.rows() - 1, 3);  // open a hole
  CHECK_THROWS_AS(MeshSdf{m}, ContractError);
}

TEST_CASE("capsule signed distance") {
  const Vec3d a(0, 0, 0), b(40, 0, 0);
  const double rho = 10;
  CHECK(capsule_signed_distance<double>(Vec3d(20, 0, 0), a, b, rho) ==
        doctest::Approx(-rho));
  CHECK(capsule_signed_distance<double>(Vec3d(20, 2 * rho, 0), a, b, rho) ==
        doctest::Approx(rho));
  CHECK(capsule_signed_distance<double>(Vec3d(-10, 0, 0), a, b, rho) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("sign flips under mesh inversion") {
  TriMesh m = make_cylinder(30, 70);
  TriMesh inv = m;
  inv.F.col(1).swap(inv.F.col(2));
  const MeshSdf sdf(m), sdf_inv(inv);
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const Vec3d p = rand_point(rng, 120);
    const double d = sdf(p);
    if (std::abs(d) < 1.0) continue;  // skip numerically on-surface points
    CHECK(sdf_inv(p) == doctest::Approx(-d).epsilon(1e-9));
  }
}

TEST_CASE("translation equivariance is exact") {
  const TriMesh m = make_box(Vec3d(60, 45, 80));
  const MeshSdf sdf(m);
  Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    const Vec3d p = rand_point(rng, 120);
    const Vec3d v = rand_point(rng, 300);
    TriMesh shifted = m;
    shifted.V.rowwise() += v.transpose();
    const MeshSdf sdf_shifted(shifted);
    CHECK(sdf_shifted(p + v) == sdf(p));  // bitwise: same arithmetic on shifted inputs
  }
}

TEST_CASE("rotation invariance to 1e-9 relative") {
  const TriMesh m = make_capped_can(25, 60);
  const MeshSdf sdf(m);
  Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    double ax[3];
    rng.unit_vector(ax);
    const Mat3d R = axis_angle_to_matrix(rng.uniform(0, 3.1) * Vec3d(ax[0], ax[1], ax[2]));
    const MeshSdf sdf_rot(transformed(m, R, Vec3d::Zero()));
    const Vec3d p = rand_point(rng, 120);
    const double d0 = sdf(p);
    const double d1 = sdf_rot(R * p);
    CHECK(d1 == doctest::Approx(d0).epsilon(1e-9));
  }
}

TEST_CASE("1-Lipschitz on random pairs") {
  const TriMesh m = make_cylinder(32, 75);
  const MeshSdf sdf(m);
  Rng rng(10);
  for (int i = 0; i < 500; ++i) {
    const Vec3d p = rand_point(rng, 130), q = rand_point(rng, 130);
    CHECK(std::abs(sdf(p) - sdf(q)) <= (p - q).norm() + 1e-9);
  }
}

TEST_CASE("capsule union min vs tessellated-mesh sdf") {
  // Tolerance frozen from measurement: exterior points agree to the marching
  // cubes surface error; interior points can disagree where one capsule's
  // nearest cap is buried inside a neighbour, so they are compared against a
  // looser bound.
  const auto& model = HandModel::standard();
  HandParams p;
  p.theta(1, 0) = -0.7;
  p.theta(4, 0) = -0.9;
  const auto caps = hand_capsules(p, model);
  const TriMesh skin = hand_surface(p, model, 3.0);
  const MeshSdf sdf(skin);
  const Box3d box = dilated(capsule_union_bounds(caps), 1.3);
  Rng rng(12);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const Vec3d q(rng.uniform(box.min().x(), box.max().x()),
                  rng.uniform(box.min().y(), box.max().y()),
                  rng.uniform(box.min().z(), box.max().z()));
    const double du = capsule_union_distance(q, caps);
    const double dm = sdf(q);
    if (du >= 0.0) {
      CHECK(std::abs(du - dm) < 1.0);
      ++checked;
    } else {
      CHECK(dm <= du + 1.0);  // mesh distance can only be deeper inside
      CHECK(std::abs(du - dm) < 6.0);
    }
  }
  CHECK(checked > 500);
}

TEST_CASE("supervision sampling: counts, fill, band fraction") {
  const auto& model = HandModel::standard();
  const HandParams hp;
  const TriMesh hand = hand_surface(hp, model, 3.5);
  TriMesh obj = make_box(Vec3d(60, 60, 60));
  obj.V.rowwise() += Vec3d(0, 140, 0).transpose();
  const MeshSdf hand_sdf(hand), obj_sdf(obj);
  Box3d ws = mesh_bounds(hand);
  ws.extend(mesh_bounds(obj));
  ws = dilated(ws, 1.2);

  Rng rng(77);
  const auto sup = sample_supervision_points(hand_sdf, obj_sdf, ws, 1000, rng);
  REQUIRE(sup.points.rows() == 1000);
  REQUIRE(sup.dists.rows() == 1000);
  int near = 0;
  for (int i = 0; i < 1000; ++i) {
    CHECK(std::isfinite(sup.dists(i, 0)));
    CHECK(std::isfinite(sup.dists(i, 1)));
    // stored distances match the oracle
    if (i % 37 == 0) {
      CHECK(sup.dists(i, 0) == doctest::Approx(hand_sdf(sup.points.row(i).transpose())));
      CHECK(sup.dists(i, 1) == doctest::Approx(obj_sdf(sup.points.row(i).transpose())));
    }
    if (std::min(std::abs(sup.dists(i, 0)), std::abs(sup.dists(i, 1))) < 40.0) ++near;
  }
  CHECK(near >= 700);  // at least the banded fraction

  Rng rng0(78);
  const auto empty = sample_supervision_points(hand_sdf, obj_sdf, ws, 0, rng0);
  CHECK(empty.points.rows() == 0);
}
