#pragma once

#include <string>

#include "sdfhoi/core/errors.hpp"
#include "sdfhoi/core/types.hpp"

namespace sdfhoi {

// Pinhole camera, x right / y down / z forward, units px and mm. Pixel (row
// i, col j) has center (u, v) = (j, i).
struct Camera {
  Mat3d K = Mat3d::Identity();
  int width = 0;
  int height = 0;

  double fx() const { return K(0, 0); }
  double fy() const { return K(1, 1); }
  double cx() const { return K(0, 2); }
  double cy() const { return K(1, 2); }

  void validate() const {
    if (width <= 0 || height <= 0)
      throw ValidationError("camera: image size must be positive");
    if (fx() <= 0 || fy() <= 0)
      throw ValidationError("camera: focal lengths must be positive");
    if (cx() < 0 || cx() > width - 1 || cy() < 0 || cy() > height - 1)
      throw ValidationError("camera: principal point outside the image");
  }

  Vec2d project(const Vec3d& p) const {
    return {fx() * p.x() / p.z() + cx(), fy() * p.y() / p.z() + cy()};
  }

  bool inside(const Vec2d& uv, double margin = 0.0) const {
    return uv.x() >= -0.5 + margin && uv.x() <= width - 0.5 - margin &&
           uv.y() >= -0.5 + margin && uv.y() <= height - 0.5 - margin;
  }

  static Camera simple(int size, double focal_factor = 1.1) {
    Camera c;
    c.width = c.height = size;
    c.K << focal_factor * size, 0, 0.5 * (size - 1), 0, focal_factor * size,
        0.5 * (size - 1), 0, 0, 1;
    return c;
  }
};

}  // namespace sdfhoi
