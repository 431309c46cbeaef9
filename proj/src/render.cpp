#include "sdfhoi/scene/render.hpp"

#include <cmath>
#include <limits>

#include "sdfhoi/core/errors.hpp"

namespace sdfhoi {

namespace {

constexpr double kZNear = 1.0;  // mm

struct Buffers {
  MatXf depth, shade;
  MatX<int> label;
};

void rasterize(const TriMesh& mesh, int label, const Camera& cam, Buffers& buf,
               int* drawn) {
  const Vec3d light = Vec3d(-0.35, 0.45, -0.82).normalized();
  const int W = cam.width, H = cam.height;
  for (Eigen::Index f = 0; f < mesh.F.rows(); ++f) {
    const Vec3d a = mesh.V.row(mesh.F(f, 0)), b = mesh.V.row(mesh.F(f, 1)),
                c = mesh.V.row(mesh.F(f, 2));
    if (a.z() <= kZNear || b.z() <= kZNear || c.z() <= kZNear) continue;
    const Vec2d pa = cam.project(a), pb = cam.project(b), pc = cam.project(c);

    const double area = (pb.x() - pa.x()) * (pc.y() - pa.y()) -
                        (pb.y() - pa.y()) * (pc.x() - pa.x());
    if (std::abs(area) < 1e-12) continue;

    const int x0 = std::max(0, static_cast<int>(std::floor(std::min({pa.x(), pb.x(), pc.x()}))));
    const int x1 = std::min(W - 1, static_cast<int>(std::ceil(std::max({pa.x(), pb.x(), pc.x()}))));
    const int y0 = std::max(0, static_cast<int>(std::floor(std::min({pa.y(), pb.y(), pc.y()}))));
    const int y1 = std::min(H - 1, static_cast<int>(std::ceil(std::max({pa.y(), pb.y(), pc.y()}))));
    if (x0 > x1 || y0 > y1) continue;
    ++*drawn;

    const Vec3d n = (b - a).cross(c - a).normalized();
    const float shade = static_cast<float>(std::abs(n.dot(light)));
    const double inv_area = 1.0 / area;
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const double px = x, py = y;  // pixel centers
        double w0 = ((pb.x() - pa.x()) * (py - pa.y()) - (pb.y() - pa.y()) * (px - pa.x())) * inv_area;
        double w1 = ((pc.x() - pb.x()) * (py - pb.y()) - (pc.y() - pb.y()) * (px - pb.x())) * inv_area;
        double w2 = 1.0 - w0 - w1;
        // inside regardless of winding: all barycentrics share the sign of 1
        if (w0 < 0 || w1 < 0 || w2 < 0) continue;
        // perspective-correct depth from linear 1/z
        const double invz = w2 / a.z() + w0 / b.z() + w1 / c.z();
        const float z = static_cast<float>(1.0 / invz);
        if (z < buf.depth(y, x)) {
          buf.depth(y, x) = z;
          buf.shade(y, x) = shade;
          buf.label(y, x) = label;
        }
      }
    }
  }
}

}  // namespace

RenderResult render_scene(const TriMesh& hand_cam, const TriMesh& object_cam,
                          const MatXd& joints_cam, const Camera& camera,
                          double heatmap_sigma) {
  camera.validate();
  const int W = camera.width, H = camera.height;
  Buffers buf;
  buf.depth = MatXf::Constant(H, W, std::numeric_limits<float>::infinity());
  buf.shade = MatXf::Zero(H, W);
  buf.label = MatX<int>::Zero(H, W);

  int drawn = 0;
  rasterize(hand_cam, 1, camera, buf, &drawn);
  if (object_cam.F.rows() > 0) rasterize(object_cam, 2, camera, buf, &drawn);
  if (drawn == 0)
    throw GenerationError("render_scene: no geometry in front of the camera");

  RenderResult out;
  MatXf depth_ch = MatXf::Zero(H, W);
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x)
      if (buf.label(y, x) != 0) depth_ch(y, x) = buf.depth(y, x) / 1000.0f;
  out.channels.push_back(std::move(depth_ch));
  out.channels.push_back(buf.shade);

  out.targets.hand_mask = (buf.label.array() == 1).cast<float>();
  out.targets.obj_mask = (buf.label.array() == 2).cast<float>();

  MatXf heat = MatXf::Zero(H, W);
  const double s2 = 2.0 * heatmap_sigma * heatmap_sigma;
  const int win = static_cast<int>(std::ceil(4.0 * heatmap_sigma));
  for (Eigen::Index j = 0; j < joints_cam.rows(); ++j) {
    const Vec3d p = joints_cam.row(j);
    if (p.z() <= kZNear) continue;
    const Vec2d uv = camera.project(p);
    const int cx = static_cast<int>(std::lround(uv.x()));
    const int cy = static_cast<int>(std::lround(uv.y()));
    for (int y = std::max(0, cy - win); y <= std::min(H - 1, cy + win); ++y)
      for (int x = std::max(0, cx - win); x <= std::min(W - 1, cx + win); ++x) {
        const double d2 = (x - uv.x()) * (x - uv.x()) + (y - uv.y()) * (y - uv.y());
        heat(y, x) += static_cast<float>(std::exp(-d2 / s2));
      }
  }
  out.targets.heatmap = heat.cwiseMin(1.0f);
  return out;
}

}  // namespace sdfhoi
