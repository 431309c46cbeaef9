#pragma once

#include <vector>

#include "sdfhoi/geometry/mesh.hpp"
#include "sdfhoi/scene/camera.hpp"
#include "sdfhoi/scene/scene.hpp"

namespace sdfhoi {

struct RenderResult {
  std::vector<MatXf> channels;  // depth (m), Lambertian shading
  Targets2d targets;
};

// Depth-buffer rasterization of hand and object meshes (camera frame) plus
// the 2D supervision targets. Per pixel the nearer surface wins, so masks are
// occlusion-aware. The heatmap is the single-channel sum of 2D Gaussians at
// the projected joints, clamped to [0, 1].
//
// Throws GenerationError when no triangle lies in front of the camera.
RenderResult render_scene(const TriMesh& hand_cam, const TriMesh& object_cam,
                          const MatXd& joints_cam, const Camera& camera,
                          double heatmap_sigma = 2.5);

}  // namespace sdfhoi
