#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace sdfhoi {

template <class S> using Vec2 = Eigen::Matrix<S, 2, 1>;
template <class S> using Vec3 = Eigen::Matrix<S, 3, 1>;
template <class S> using Mat3 = Eigen::Matrix<S, 3, 3>;
template <class S> using Mat4 = Eigen::Matrix<S, 4, 4>;

// Dynamic matrices are row-major throughout: rows index entities (points,
// tokens, vertices, channels), columns index coordinates/features.
template <class S>
using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <class S> using VecX = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using Vec2d = Vec2<double>;
using Vec3d = Vec3<double>;
using Mat3d = Mat3<double>;
using Mat4d = Mat4<double>;
using MatXd = MatX<double>;
using MatXf = MatX<float>;
using VecXd = VecX<double>;

using Box3d = Eigen::AlignedBox<double, 3>;

using MatX3i = Eigen::Matrix<int, Eigen::Dynamic, 3, Eigen::RowMajor>;

inline Box3d dilated(const Box3d& b, double factor) {
  const Vec3d c = b.center();
  const Vec3d h = 0.5 * b.sizes() * factor;
  return Box3d(c - h, c + h);
}

}  // namespace sdfhoi
