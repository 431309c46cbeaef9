#pragma once

#include "sdfhoi/core/rng.hpp"
#include "sdfhoi/core/types.hpp"
#include "sdfhoi/geometry/sdf.hpp"

namespace sdfhoi {

// 3D query points with precomputed ground-truth signed distances to both
// surfaces. Sampling policy: band_fraction of the points hug a surface (an
// area-weighted surface sample offset by up to band_mm, split evenly between
// hand and object), the rest are uniform over the workspace volume.
struct SupervisionPoints {
  MatXd points;  // n x 3
  MatXd dists;   // n x 2: (hand, object)
};

inline SupervisionPoints sample_supervision_points(const MeshSdf& hand,
                                                   const MeshSdf& object,
                                                   const Box3d& workspace, int count,
                                                   Rng& rng, double band_mm = 40.0,
                                                   double band_fraction = 0.7) {
  SupervisionPoints out;
  out.points.resize(count, 3);
  out.dists.resize(count, 2);
  const int banded = static_cast<int>(std::lround(band_fraction * count));
  for (int i = 0; i < count; ++i) {
    Vec3d p;
    if (i < banded) {
      const MeshSdf& target = (i % 2 == 0) ? hand : object;
      for (int tries = 0;; ++tries) {
        const MatXd s = sample_surface(target.mesh(), 1, rng);
        double dir[3];
        rng.unit_vector(dir);
        p = s.row(0).transpose() + rng.uniform(-band_mm, band_mm) * Vec3d(dir[0], dir[1], dir[2]);
        if (workspace.contains(p) || tries >= 16) break;
      }
      // keep stragglers inside the normalization volume
      p = p.cwiseMax(workspace.min()).cwiseMin(workspace.max());
    } else {
      p = Vec3d(rng.uniform(workspace.min().x(), workspace.max().x()),
                rng.uniform(workspace.min().y(), workspace.max().y()),
                rng.uniform(workspace.min().z(), workspace.max().z()));
    }
    out.points.row(i) = p.transpose();
    out.dists(i, 0) = hand(p);
    out.dists(i, 1) = object(p);
  }
  return out;
}

}  // namespace sdfhoi
