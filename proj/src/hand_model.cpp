#include "sdfhoi/hand/hand.hpp"

namespace sdfhoi {

namespace {

HandModel build_standard() {
  HandModel m;
  m.parent[0] = -1;
  for (int f = 0; f < 5; ++f)
    for (int s = 0; s < 4; ++s)
      m.parent[static_cast<std::size_t>(4 * f + 1 + s)] = s == 0 ? 0 : 4 * f + s;

  // Rest pose (mm), wrist at origin, fingers along +y, palm normal +z,
  // thumb toward +x. Wrist-to-middle-tip span ~185 mm.
  const double mcp[5][3] = {{38, 28, -8},  // thumb
                            {27, 82, 0},
                            {9, 86, 0},
                            {-9, 81, 0},
                            {-26, 72, 0}};
  // proximal / middle / distal phalanx lengths per finger
  const double phal[5][3] = {{34, 28, 24},
                             {42, 26, 20},
                             {48, 30, 22},
                             {44, 28, 21},
                             {33, 22, 18}};
  m.rest_offset.setZero();
  for (int f = 0; f < 5; ++f) {
    const Vec3d base(mcp[f][0], mcp[f][1], mcp[f][2]);
    m.rest_offset.row(4 * f + 1) = base.transpose();
    // phalanges continue along the metacarpal direction in rest pose
    const Vec3d dir = base.normalized();
    for (int s = 0; s < 3; ++s)
      m.rest_offset.row(4 * f + 2 + s) = (phal[f][s] * dir).transpose();
  }

  // Capsule radii: thick metacarpals form the palm mass, phalanges taper.
  // Adjacent bones keep similar radii so the union skin stays smooth.
  const double meta_r[5] = {13, 13.5, 14, 13.5, 11.5};
  const double phal_r[5][3] = {{10.5, 9.5, 8.5},
                               {8.5, 7.5, 6.5},
                               {9, 8, 7},
                               {8.5, 7.5, 6.5},
                               {7.5, 6.5, 6}};
  for (int f = 0; f < 5; ++f) {
    m.radius(4 * f) = meta_r[f];
    for (int s = 0; s < 3; ++s) m.radius(4 * f + 1 + s) = phal_r[f][s];
  }

  // Shape basis: column 0 is a global size mode, the rest are fixed
  // pseudo-random local modes. Column magnitudes keep every bone length and
  // radius positive over beta in [-2, 2]^10.
  Rng rng(0x5df401);
  for (int b = 0; b < kHandBones; ++b) {
    m.len_basis(b, 0) = 0.06;
    m.rad_basis(b, 0) = 0.04;
    for (int k = 1; k < kShapeCoeffs; ++k) {
      m.len_basis(b, k) = 0.02 * rng.normal();
      m.rad_basis(b, k) = 0.012 * rng.normal();
    }
    // cap the total per-bone sensitivity
    const double ls = m.len_basis.row(b).cwiseAbs().sum();
    if (ls > 0.35) m.len_basis.row(b) *= 0.35 / ls;
    const double rs = m.rad_basis.row(b).cwiseAbs().sum();
    if (rs > 0.3) m.rad_basis.row(b) *= 0.3 / rs;
  }
  return m;
}

}  // namespace

const HandModel& HandModel::standard() {
  static const HandModel model = build_standard();
  return model;
}

}  // namespace sdfhoi
