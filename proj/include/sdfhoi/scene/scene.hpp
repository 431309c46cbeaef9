#pragma once

#include <cstdint>
#include <vector>

#include "sdfhoi/core/container.hpp"
#include "sdfhoi/core/types.hpp"
#include "sdfhoi/geometry/mesh.hpp"
#include "sdfhoi/hand/hand.hpp"
#include "sdfhoi/scene/camera.hpp"

namespace sdfhoi {

// 2D supervision targets at full image resolution. Masks are {0,1}-valued
// and occlusion-aware; the heatmap is a clamped sum of per-joint Gaussians.
struct Targets2d {
  MatXf heatmap;
  MatXf hand_mask;
  MatXf obj_mask;
};

enum class ObjectCategory : int { Box = 0, Cylinder = 1, Can = 2 };

// One synthetic frame with full ground truth. Geometry lives in the camera
// frame (mm) except object_mesh, which stays in the object frame and is posed
// by (object_rot, object_trans).
struct SceneSample {
  std::uint64_t id = 0;
  Camera camera;
  std::vector<MatXf> image;  // channels (depth, shading), each H x W

  HandParams hand_params;
  MatXd hand_joints;  // 21 x 3, camera frame
  TriMesh hand_mesh;  // camera frame

  TriMesh object_mesh;  // object frame
  int object_category = 0;
  Vec3d object_rot = Vec3d::Zero();    // axis-angle, |r| <= pi
  Vec3d object_trans = Vec3d::Zero();  // mm

  Targets2d targets;

  MatXd sdf_points;  // N x 3, camera frame
  MatXd sdf_dists;   // N x 2: distance to hand, to object

  TriMesh posed_object() const {
    return transformed(object_mesh, axis_angle_to_matrix(object_rot), object_trans);
  }

  // Query-point normalization volume: bounds of both surfaces dilated 20%.
  Box3d workspace() const {
    Box3d b = mesh_bounds(hand_mesh);
    b.extend(mesh_bounds(posed_object()));
    return dilated(b, 1.2);
  }

  Bundle to_bundle() const;
  static SceneSample from_bundle(const Bundle& b);
};

void save_dataset(const std::string& path, const std::vector<SceneSample>& scenes);
std::vector<SceneSample> load_dataset(const std::string& path);
// Content hash without loading full payloads (for run manifests).
std::uint64_t dataset_hash(const std::string& path);

}  // namespace sdfhoi
