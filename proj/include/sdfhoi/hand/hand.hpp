#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "sdfhoi/core/dual.hpp"
#include "sdfhoi/core/errors.hpp"
#include "sdfhoi/core/rng.hpp"
#include "sdfhoi/core/types.hpp"
#include "sdfhoi/geometry/mesh.hpp"
#include "sdfhoi/geometry/sdf.hpp"

namespace sdfhoi {

inline constexpr int kHandJoints = 21;      // wrist + 5 fingers x 4
inline constexpr int kHandBones = 20;       // one per non-root joint
inline constexpr int kArticulated = 16;     // wrist + 3 per finger
inline constexpr int kShapeCoeffs = 10;

// Pose parameters: one axis-angle triplet per articulated joint (row 0 is the
// global wrist rotation) plus shape coefficients scaling bone lengths and
// capsule radii around the template.
struct HandParams {
  Eigen::Matrix<double, kArticulated, 3, Eigen::RowMajor> theta =
      Eigen::Matrix<double, kArticulated, 3, Eigen::RowMajor>::Zero();
  Eigen::Matrix<double, kShapeCoeffs, 1> beta =
      Eigen::Matrix<double, kShapeCoeffs, 1>::Zero();
};

inline constexpr double kThetaLimit = std::numbers::pi / 2;
inline constexpr double kBetaLimit = 2.0;

// Capsule-skinned kinematic template. Joint order: 0 = wrist, then per
// finger f in {thumb, index, middle, ring, pinky}: 4f+1 (MCP), 4f+2 (PIP),
// 4f+3 (DIP), 4f+4 (tip). Bone b connects joint b+1 to its parent.
struct HandModel {
  std::array<int, kHandJoints> parent;
  Eigen::Matrix<double, kHandJoints, 3, Eigen::RowMajor> rest_offset;  // in parent frame
  Eigen::Matrix<double, kHandBones, 1> radius;                         // mm
  // Per-unit-beta scale factors: length/radius of bone b scales by
  // (1 + basis.row(b) * beta). Column sums are kept small enough that
  // lengths stay positive over the whole valid beta range.
  Eigen::Matrix<double, kHandBones, kShapeCoeffs, Eigen::RowMajor> len_basis;
  Eigen::Matrix<double, kHandBones, kShapeCoeffs, Eigen::RowMajor> rad_basis;

  static const HandModel& standard();

  // Which theta row drives joint j; -1 for fingertips (no own rotation).
  static int rotation_index(int joint) {
    if (joint == 0) return 0;
    const int f = (joint - 1) / 4, s = (joint - 1) % 4;
    return s < 3 ? 1 + 3 * f + s : -1;
  }

  double bone_length(int bone) const { return rest_offset.row(bone + 1).norm(); }
};

inline void validate(const HandParams& p) {
  for (int i = 0; i < kArticulated; ++i)
    for (int j = 0; j < 3; ++j)
      if (!(std::abs(p.theta(i, j)) <= kThetaLimit) || !std::isfinite(p.theta(i, j)))
        throw ValidationError("hand params: theta(" + std::to_string(i) + "," +
                              std::to_string(j) + ") = " + std::to_string(p.theta(i, j)) +
                              " outside [-pi/2, pi/2]");
  for (int i = 0; i < kShapeCoeffs; ++i)
    if (!(std::abs(p.beta(i)) <= kBetaLimit) || !std::isfinite(p.beta(i)))
      throw ValidationError("hand params: beta(" + std::to_string(i) + ") = " +
                            std::to_string(p.beta(i)) + " outside [-2, 2]");
}

namespace detail {

// 3x3 ops on flat arrays so the kinematic chain stays scalar-generic
// (double for evaluation, Dual<double> for exact derivatives).
template <class S>
using M3 = std::array<S, 9>;
template <class S>
using V3 = std::array<S, 3>;

template <class S>
M3<S> m3_identity() {
  return {S(1), S(0), S(0), S(0), S(1), S(0), S(0), S(0), S(1)};
}

template <class S>
M3<S> m3_mul(const M3<S>& a, const M3<S>& b) {
  M3<S> c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      c[3 * i + j] =
          a[3 * i] * b[j] + a[3 * i + 1] * b[3 + j] + a[3 * i + 2] * b[6 + j];
  return c;
}

template <class S>
V3<S> m3_apply(const M3<S>& a, const V3<S>& v) {
  return {a[0] * v[0] + a[1] * v[1] + a[2] * v[2],
          a[3] * v[0] + a[4] * v[1] + a[5] * v[2],
          a[6] * v[0] + a[7] * v[1] + a[8] * v[2]};
}

// Rodrigues from an unnormalized axis-angle vector, written in terms of
// u = |r|^2 so it stays smooth (and dual-differentiable) through r = 0:
//   R = I + A(u) K + B(u) K^2,  A = sin(t)/t,  B = (1 - cos(t))/t^2.
template <class S>
M3<S> rodrigues(const V3<S>& r) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const S u = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
  S A, B;
  if (value(u) < 1e-12) {
    A = S(1) - u * (1.0 / 6.0);
    B = S(0.5) - u * (1.0 / 24.0);
  } else {
    const S t = sqrt(u);
    A = sin(t) / t;
    B = (S(1) - cos(t)) / u;
  }
  const S &x = r[0], &y = r[1], &z = r[2];
  M3<S> R;
  R[0] = S(1) + B * (-y * y - z * z);
  R[1] = B * x * y - A * z;
  R[2] = B * x * z + A * y;
  R[3] = B * x * y + A * z;
  R[4] = S(1) + B * (-x * x - z * z);
  R[5] = B * y * z - A * x;
  R[6] = B * x * z - A * y;
  R[7] = B * y * z + A * x;
  R[8] = S(1) + B * (-x * x - y * y);
  return R;
}

// Kinematic chain over flat parameter arrays: theta is 48 scalars (16 rows of
// 3), beta 10, output 63 (21 joints x 3). Wrist sits at the origin of the
// root transform.
template <class S>
void fk_chain(const S* theta, const S* beta, const HandModel& model, S* joints_out) {
  std::array<M3<S>, kHandJoints> R;
  std::array<V3<S>, kHandJoints> t;
  {
    const V3<S> r0 = {theta[0], theta[1], theta[2]};
    R[0] = rodrigues(r0);
    t[0] = {S(0), S(0), S(0)};
  }
  for (int j = 1; j < kHandJoints; ++j) {
    const int par = model.parent[static_cast<std::size_t>(j)];
    const int bone = j - 1;
    S scale = S(1);
    for (int k = 0; k < kShapeCoeffs; ++k)
      scale += S(model.len_basis(bone, k)) * beta[k];
    const V3<S> off = {S(model.rest_offset(j, 0)) * scale,
                       S(model.rest_offset(j, 1)) * scale,
                       S(model.rest_offset(j, 2)) * scale};
    const V3<S> world_off = m3_apply(R[par], off);
    t[j] = {t[par][0] + world_off[0], t[par][1] + world_off[1],
            t[par][2] + world_off[2]};
    const int rot = HandModel::rotation_index(j);
    if (rot >= 0) {
      const V3<S> rj = {theta[3 * rot], theta[3 * rot + 1], theta[3 * rot + 2]};
      R[j] = m3_mul(R[par], rodrigues(rj));
    } else {
      R[j] = R[par];
    }
  }
  for (int j = 0; j < kHandJoints; ++j)
    for (int k = 0; k < 3; ++k) joints_out[3 * j + k] = t[j][static_cast<std::size_t>(k)];
}

}  // namespace detail

// Joint positions (mm) in the hand frame; wrist at the origin.
inline Eigen::Matrix<double, kHandJoints, 3, Eigen::RowMajor> forward_kinematics(
    const HandParams& p, const HandModel& model) {
  validate(p);
  Eigen::Matrix<double, kHandJoints, 3, Eigen::RowMajor> out;
  detail::fk_chain<double>(p.theta.data(), p.beta.data(), model, out.data());
  return out;
}

// Exact Jacobian of the 63 joint coordinates w.r.t. the 58 parameters
// (48 theta + 10 beta), via forward-mode duals.
inline MatXd fk_jacobian(const HandParams& p, const HandModel& model) {
  using D = Dual<double>;
  std::array<D, 48> theta;
  std::array<D, 10> beta;
  for (int i = 0; i < 48; ++i) theta[static_cast<std::size_t>(i)] = D(p.theta.data()[i]);
  for (int i = 0; i < 10; ++i) beta[static_cast<std::size_t>(i)] = D(p.beta(i));
  MatXd J(63, 58);
  std::array<D, 63> joints;
  for (int col = 0; col < 58; ++col) {
    D* slot = col < 48 ? &theta[static_cast<std::size_t>(col)]
                       : &beta[static_cast<std::size_t>(col - 48)];
    slot->d = 1.0;
    detail::fk_chain<D>(theta.data(), beta.data(), model, joints.data());
    slot->d = 0.0;
    for (int r = 0; r < 63; ++r) J(r, col) = joints[static_cast<std::size_t>(r)].d;
  }
  return J;
}

// Capsule skin for a posed hand, one capsule per bone.
inline std::vector<Capsule> hand_capsules(const HandParams& p, const HandModel& model) {
  const auto joints = forward_kinematics(p, model);
  std::vector<Capsule> caps;
  caps.reserve(kHandBones);
  for (int b = 0; b < kHandBones; ++b) {
    const int j = b + 1, par = model.parent[static_cast<std::size_t>(j)];
    double r = model.radius(b);
    double scale = 1.0 + model.rad_basis.row(b) * p.beta;
    caps.push_back({joints.row(par).transpose(), joints.row(j).transpose(), r * scale});
  }
  return caps;
}

// Watertight tessellation of the capsule union via isosurface extraction.
// Deterministic for a fixed cell size.
inline TriMesh hand_surface(const HandParams& p, const HandModel& model,
                            double cell_size = 3.0) {
  const auto caps = hand_capsules(p, model);
  const Box3d bounds = capsule_union_bounds(caps);
  return marching_cubes(
      [&caps](const Vec3d& q) { return capsule_union_distance(q, caps); }, bounds,
      cell_size);
}

}  // namespace sdfhoi
