#include <doctest.h>

#include "sdfhoi/core/rng.hpp"
#include "sdfhoi/geometry/sdf.hpp"
#include "sdfhoi/hand/hand.hpp"

using namespace sdfhoi;

namespace {

HandParams random_params(Rng& rng, double theta_scale = 1.0) {
  HandParams p;
  for (int i = 0; i < kArticulated; ++i)
    for (int j = 0; j < 3; ++j) p.theta(i, j) = theta_scale * rng.uniform(-1.2, 1.2);
  for (int k = 0; k < kShapeCoeffs; ++k) p.beta(k) = rng.uniform(-1.8, 1.8);
  return p;
}

// Naive oracle: sequential 4x4 homogeneous transform composition, kept
// independent of the flat-array chain used by forward_kinematics.
MatXd fk_naive(const HandParams& p, const HandModel& m) {
  std::array<Mat4d, kHandJoints> world;
  MatXd out(kHandJoints, 3);
  for (int j = 0; j < kHandJoints; ++j) {
    Mat4d local = Mat4d::Identity();
    if (j > 0) {
      const int bone = j - 1;
      const double scale = 1.0 + m.len_basis.row(bone) * p.beta;
      local.block<3, 1>(0, 3) = m.rest_offset.row(j).transpose() * scale;
    }
    const int rot = HandModel::rotation_index(j);
    if (rot >= 0)
      local.block<3, 3>(0, 0) = axis_angle_to_matrix(p.theta.row(rot).transpose());
    const int par = m.parent[static_cast<std::size_t>(j)];
    world[static_cast<std::size_t>(j)] =
        (par < 0 ? Mat4d::Identity() : world[static_cast<std::size_t>(par)]) * local;
    out.row(j) = world[static_cast<std::size_t>(j)].block<3, 1>(0, 3).transpose();
  }
  return out;
}

}  // namespace

TEST_CASE("model template is a single-root acyclic tree with positive sizes") {
  const auto& m = HandModel::standard();
  CHECK(m.parent[0] == -1);
  for (int j = 1; j < kHandJoints; ++j) {
    CHECK(m.parent[static_cast<std::size_t>(j)] >= 0);
    CHECK(m.parent[static_cast<std::size_t>(j)] < j);  // parents precede children
  }
  for (int b = 0; b < kHandBones; ++b) {
    CHECK(m.bone_length(b) > 0);
    CHECK(m.radius(b) > 0);
    // lengths and radii stay positive across the whole beta range
    CHECK(m.len_basis.row(b).cwiseAbs().sum() * kBetaLimit < 1.0);
    CHECK(m.rad_basis.row(b).cwiseAbs().sum() * kBetaLimit < 1.0);
  }
  // wrist-to-middle-fingertip span near 180 mm at rest
  const auto joints = forward_kinematics(HandParams{}, m);
  const double span = (joints.row(12) - joints.row(0)).norm();
  CHECK(span == doctest::Approx(180).epsilon(0.05));
}

TEST_CASE("identity pose returns rest template positions") {
  const auto& m = HandModel::standard();
  const auto joints = forward_kinematics(HandParams{}, m);
  CHECK(joints.row(0).norm() == 0.0);
  for (int j = 1; j < kHandJoints; ++j) {
    const int par = m.parent[static_cast<std::size_t>(j)];
    const Vec3d expect = joints.row(par).transpose() + m.rest_offset.row(j).transpose();
    CHECK((joints.row(j).transpose() - expect).norm() == doctest::Approx(0.0));
  }
}

TEST_CASE("uniform beta = +1 scales each bone by its template factor") {
  const auto& m = HandModel::standard();
  HandParams p;
  p.beta.setOnes();
  const auto scaled = forward_kinematics(p, m);
  const auto rest = forward_kinematics(HandParams{}, m);
  for (int j = 1; j < kHandJoints; ++j) {
    const int par = m.parent[static_cast<std::size_t>(j)];
    const int bone = j - 1;
    const double factor = 1.0 + m.len_basis.row(bone).sum();
    const double rest_len = (rest.row(j) - rest.row(par)).norm();
    const double new_len = (scaled.row(j) - scaled.row(par)).norm();
    CHECK(new_len == doctest::Approx(rest_len * factor).epsilon(1e-12));
  }
}

TEST_CASE("fk matches the naive 4x4 composition oracle") {
  const auto& m = HandModel::standard();
  Rng rng(1234);
  for (int trial = 0; trial < 25; ++trial) {
    const HandParams p = random_params(rng);
    const auto fast = forward_kinematics(p, m);
    const MatXd ref = fk_naive(p, m);
    CHECK((fast - ref).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("out-of-range parameters name the offending index") {
  HandParams p;
  p.theta(5, 2) = 2.0;
  try {
    (void)forward_kinematics(p, HandModel::standard());
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("theta(5,2)") != std::string::npos);
  }
  HandParams q;
  q.beta(4) = 2.5;
  try {
    validate(q);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("beta(4)") != std::string::npos);
  }
}

TEST_CASE("analytic jacobian matches central finite differences") {
  const auto& m = HandModel::standard();
  Rng rng(99);
  const HandParams p = random_params(rng, 0.9);
  const MatXd J = fk_jacobian(p, m);
  const double h = 1e-6;
  Rng pick(5);
  for (int probe = 0; probe < 40; ++probe) {
    const int col = static_cast<int>(pick.below(58));
    HandParams lo = p, hi = p;
    if (col < 48) {
      hi.theta.data()[col] += h;
      lo.theta.data()[col] -= h;
    } else {
      hi.beta(col - 48) += h;
      lo.beta(col - 48) -= h;
    }
    Eigen::Matrix<double, 63, 1> fd;
    {
      Eigen::Matrix<double, kHandJoints, 3, Eigen::RowMajor> a, b;
      detail::fk_chain<double>(hi.theta.data(), hi.beta.data(), m, a.data());
      detail::fk_chain<double>(lo.theta.data(), lo.beta.data(), m, b.data());
      Eigen::Map<const Eigen::Matrix<double, 63, 1>> av(a.data()), bv(b.data());
      fd = (av - bv) / (2 * h);
    }
    const VecXd an = J.col(col);
    const double denom = std::max(1.0, an.norm());
    CHECK((fd - an).norm() / denom < 1e-4);
  }
}

TEST_CASE("hand surface mesh: watertight, contains joints and axis endpoints") {
  const auto& m = HandModel::standard();
  Rng rng(31);
  const HandParams p = random_params(rng, 0.7);
  const TriMesh skin = hand_surface(p, m, 3.0);
  std::string why;
  REQUIRE(is_watertight(skin, &why));
  const MeshSdf sdf(skin);
  const auto joints = forward_kinematics(p, m);
  const Box3d bb = mesh_bounds(skin);
  for (int j = 0; j < kHandJoints; ++j) {
    CHECK(bb.contains(Vec3d(joints.row(j).transpose())));
    CHECK(sdf(joints.row(j).transpose()) < 0.0);  // joints lie inside the skin
  }
}

TEST_CASE("generated-scene invariant: joint sdf is at most minus half the incident radius") {
  const auto& m = HandModel::standard();
  const HandParams p;  // rest pose
  const TriMesh skin = hand_surface(p, m, 3.0);
  const MeshSdf sdf(skin);
  const auto joints = forward_kinematics(p, m);
  for (int j = 0; j < kHandJoints; ++j) {
    double r_min = 1e9;
    for (int b = 0; b < kHandBones; ++b)
      if (b + 1 == j || m.parent[static_cast<std::size_t>(b + 1)] == j)
        r_min = std::min(r_min, m.radius(b));
    CHECK(sdf(joints.row(j).transpose()) <= -0.5 * r_min);
  }
}

TEST_CASE("doubling tessellation resolution moves vertices < 1 mm") {
  const auto& m = HandModel::standard();
  HandParams p;
  p.theta(2, 0) = -0.5;
  const TriMesh coarse = hand_surface(p, m, 3.0);
  const TriMesh fine = hand_surface(p, m, 1.5);
  // brute-force vertex-to-mesh distances, subsampled for runtime
  double worst = 0;
  for (Eigen::Index i = 0; i < fine.V.rows(); i += 7) {
    double best = 1e18;
    const Vec3d q = fine.V.row(i);
    for (Eigen::Index f = 0; f < coarse.F.rows(); ++f) {
      const Vec3d a = coarse.V.row(coarse.F(f, 0)), b = coarse.V.row(coarse.F(f, 1)),
                  c = coarse.V.row(coarse.F(f, 2));
      best = std::min(best, (q - closest_point_on_triangle<double>(q, a, b, c)).squaredNorm());
    }
    worst = std::max(worst, std::sqrt(best));
  }
  CHECK(worst < 1.0);
}

TEST_CASE("surface mesh is deterministic for a fixed resolution") {
  const auto& m = HandModel::standard();
  Rng rng(55);
  const HandParams p = random_params(rng, 0.5);
  const TriMesh a = hand_surface(p, m, 3.0);
  const TriMesh b = hand_surface(p, m, 3.0);
  CHECK(a.V == b.V);
  CHECK(a.F == b.F);
}
