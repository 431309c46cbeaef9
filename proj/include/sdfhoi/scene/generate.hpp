#pragma once

#include <cstdint>

#include "sdfhoi/core/config.hpp"
#include "sdfhoi/scene/scene.hpp"

namespace sdfhoi {

struct GenConfig {
  int image_size = 128;
  double focal_factor = 1.1;
  double z_min = 420.0, z_max = 650.0;  // wrist depth range, mm
  int supervision_points = 1000;
  double band_mm = 40.0;
  double band_fraction = 0.7;
  double gap_min = -2.0, gap_max = 60.0;  // hand-object surface gap, mm
  double heatmap_sigma = 2.5;
  double hand_cell = 3.0;  // capsule tessellation cell size, mm

  static GenConfig from_config(const Config& c);
  void to_config(Config& c) const;
};

// Deterministic in `seed`; rejection-samples until the hand grasps or hovers
// near the object, every joint projects inside the image, and both masks are
// nonempty. Throws GenerationError after 100 failed attempts.
SceneSample generate_scene(std::uint64_t seed, const GenConfig& cfg);

}  // namespace sdfhoi
