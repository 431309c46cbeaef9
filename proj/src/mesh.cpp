#include "sdfhoi/geometry/mesh.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "sdfhoi/core/errors.hpp"

namespace sdfhoi {

Box3d mesh_bounds(const TriMesh& m) {
  Box3d b;
  for (Eigen::Index i = 0; i < m.V.rows(); ++i) b.extend(Vec3d(m.V.row(i)));
  return b;
}

double surface_area(const TriMesh& m) {
  double a = 0;
  for (Eigen::Index f = 0; f < m.F.rows(); ++f) {
    const Vec3d v0 = m.V.row(m.F(f, 0)), v1 = m.V.row(m.F(f, 1)),
                v2 = m.V.row(m.F(f, 2));
    a += 0.5 * (v1 - v0).cross(v2 - v0).norm();
  }
  return a;
}

bool is_watertight(const TriMesh& m, std::string* reason) {
  auto bad = [&](const std::string& why) {
    if (reason) *reason = why;
    return false;
  };
  if (m.F.rows() == 0) return bad("empty mesh");
  // key: undirected edge; value: (count, orientation balance)
  std::map<std::pair<int, int>, std::pair<int, int>> edges;
  for (Eigen::Index f = 0; f < m.F.rows(); ++f) {
    const int i0 = m.F(f, 0), i1 = m.F(f, 1), i2 = m.F(f, 2);
    if (i0 == i1 || i1 == i2 || i0 == i2)
      return bad("degenerate face " + std::to_string(f));
    const int e[3][2] = {{i0, i1}, {i1, i2}, {i2, i0}};
    for (const auto& ed : e) {
      auto key = std::minmax(ed[0], ed[1]);
      auto& rec = edges[{key.first, key.second}];
      rec.first += 1;
      rec.second += (ed[0] < ed[1]) ? 1 : -1;
    }
  }
  for (const auto& [k, rec] : edges) {
    if (rec.first != 2)
      return bad("edge (" + std::to_string(k.first) + "," + std::to_string(k.second) +
                 ") shared by " + std::to_string(rec.first) + " faces");
    if (rec.second != 0)
      return bad("inconsistent orientation at edge (" + std::to_string(k.first) + "," +
                 std::to_string(k.second) + ")");
  }
  return true;
}

TriMesh transformed(const TriMesh& m, const Mat3d& R, const Vec3d& t) {
  TriMesh out;
  out.V = (m.V * R.transpose()).rowwise() + t.transpose();
  out.F = m.F;
  return out;
}

MatXd sample_surface(const TriMesh& m, int count, Rng& rng) {
  std::vector<double> cum(static_cast<std::size_t>(m.F.rows()));
  double acc = 0;
  for (Eigen::Index f = 0; f < m.F.rows(); ++f) {
    const Vec3d v0 = m.V.row(m.F(f, 0)), v1 = m.V.row(m.F(f, 1)),
                v2 = m.V.row(m.F(f, 2));
    acc += 0.5 * (v1 - v0).cross(v2 - v0).norm();
    cum[static_cast<std::size_t>(f)] = acc;
  }
  MatXd out(count, 3);
  for (int i = 0; i < count; ++i) {
    const double u = rng.uniform() * acc;
    const auto it = std::lower_bound(cum.begin(), cum.end(), u);
    const auto f = static_cast<Eigen::Index>(it - cum.begin());
    const Vec3d v0 = m.V.row(m.F(f, 0)), v1 = m.V.row(m.F(f, 1)),
                v2 = m.V.row(m.F(f, 2));
    const double s = std::sqrt(rng.uniform()), t = rng.uniform();
    out.row(i) = ((1 - s) * v0 + s * (1 - t) * v1 + s * t * v2).transpose();
  }
  return out;
}

namespace {

// Vertex welding helper: quantizes positions so co-located grid vertices from
// different faces collapse to one index.
class Welder {
 public:
  explicit Welder(double eps = 1e-7) : inv_eps_(1.0 / eps) {}

  int add(const Vec3d& p) {
    const std::array<long long, 3> key = {llround(p.x()), llround(p.y()),
                                          llround(p.z())};
    const auto [it, fresh] = index_.try_emplace(key, static_cast<int>(verts_.size()));
    if (fresh) verts_.push_back(p);
    return it->second;
  }

  MatXd vertices() const {
    MatXd V(static_cast<Eigen::Index>(verts_.size()), 3);
    for (std::size_t i = 0; i < verts_.size(); ++i)
      V.row(static_cast<Eigen::Index>(i)) = verts_[i].transpose();
    return V;
  }

 private:
  long long llround(double v) const { return std::llround(v * inv_eps_); }
  double inv_eps_;
  std::map<std::array<long long, 3>, int> index_;
  std::vector<Vec3d> verts_;
};

TriMesh build(Welder& w, const std::vector<std::array<int, 3>>& faces) {
  TriMesh m;
  m.V = w.vertices();
  m.F.resize(static_cast<Eigen::Index>(faces.size()), 3);
  for (std::size_t i = 0; i < faces.size(); ++i)
    m.F.row(static_cast<Eigen::Index>(i)) << faces[i][0], faces[i][1], faces[i][2];
  return m;
}

}  // namespace

TriMesh make_box(const Vec3d& extents, int subdiv) {
  const Vec3d h = 0.5 * extents;
  Welder w;
  std::vector<std::array<int, 3>> faces;
  // +axis and -axis face per dimension; (u, v) span the other two axes
  for (int axis = 0; axis < 3; ++axis) {
    for (int sign = -1; sign <= 1; sign += 2) {
      const int ua = (axis + 1) % 3, va = (axis + 2) % 3;
      for (int i = 0; i < subdiv; ++i) {
        for (int j = 0; j < subdiv; ++j) {
          auto corner = [&](int di, int dj) {
            Vec3d p;
            p[axis] = sign * h[axis];
            p[ua] = -h[ua] + 2 * h[ua] * (i + di) / subdiv;
            p[va] = -h[va] + 2 * h[va] * (j + dj) / subdiv;
            return p;
          };
          const int a = w.add(corner(0, 0)), b = w.add(corner(1, 0)),
                    c = w.add(corner(1, 1)), d = w.add(corner(0, 1));
          if (sign > 0) {
            faces.push_back({a, b, c});
            faces.push_back({a, c, d});
          } else {
            faces.push_back({a, c, b});
            faces.push_back({a, d, c});
          }
        }
      }
    }
  }
  return build(w, faces);
}

TriMesh make_cylinder(double radius, double height, int segments) {
  Welder w;
  std::vector<std::array<int, 3>> faces;
  const double hz = 0.5 * height;
  auto ring = [&](double z, double r, int k) {
    const double a = 2 * std::numbers::pi * k / segments;
    return Vec3d(r * std::cos(a), r * std::sin(a), z);
  };
  const int top = w.add(Vec3d(0, 0, hz)), bot = w.add(Vec3d(0, 0, -hz));
  for (int k = 0; k < segments; ++k) {
    const int k1 = (k + 1) % segments;
    const int a = w.add(ring(-hz, radius, k)), b = w.add(ring(-hz, radius, k1));
    const int c = w.add(ring(hz, radius, k)), d = w.add(ring(hz, radius, k1));
    faces.push_back({a, b, d});
    faces.push_back({a, d, c});
    faces.push_back({c, d, top});
    faces.push_back({b, a, bot});
  }
  return build(w, faces);
}

TriMesh make_capped_can(double radius, double height, int segments, int cap_bands) {
  // Straight side of length `height` plus hemispherical caps; total extent
  // along z is height + 2*radius.
  Welder w;
  std::vector<std::array<int, 3>> faces;
  const double hz = 0.5 * height;
  auto at = [&](double z, double r, int k) {
    const double a = 2 * std::numbers::pi * k / segments;
    return Vec3d(r * std::cos(a), r * std::sin(a), z);
  };
  auto band = [&](double z0, double r0, double z1, double r1) {
    for (int k = 0; k < segments; ++k) {
      const int k1 = (k + 1) % segments;
      const int a = w.add(at(z0, r0, k)), b = w.add(at(z0, r0, k1));
      const int c = w.add(at(z1, r1, k)), d = w.add(at(z1, r1, k1));
      if (r1 > 0) {
        faces.push_back({a, b, d});
        faces.push_back({a, d, c});
      } else {
        const int apex = w.add(Vec3d(0, 0, z1));
        faces.push_back({a, b, apex});
      }
    }
  };
  band(-hz, radius, hz, radius);  // side
  for (int s = -1; s <= 1; s += 2) {
    for (int i = 0; i < cap_bands; ++i) {
      const double t0 = 0.5 * std::numbers::pi * i / cap_bands;
      const double t1 = 0.5 * std::numbers::pi * (i + 1) / cap_bands;
      const double z0 = s * (hz + radius * std::sin(t0));
      const double z1 = s * (hz + radius * std::sin(t1));
      const double r0 = radius * std::cos(t0), r1 = radius * std::cos(t1);
      if (s > 0)
        band(z0, r0, z1, r1 < 1e-12 ? 0.0 : r1);
      else {
        // mirror: reverse winding by swapping the band direction
        for (int k = 0; k < segments; ++k) {
          const int k1 = (k + 1) % segments;
          const int a = w.add(at(z0, r0, k)), b = w.add(at(z0, r0, k1));
          if (r1 < 1e-12) {
            const int apex = w.add(Vec3d(0, 0, z1));
            faces.push_back({b, a, apex});
          } else {
            const int c = w.add(at(z1, r1, k)), d = w.add(at(z1, r1, k1));
            faces.push_back({b, a, c});
            faces.push_back({b, c, d});
          }
        }
      }
    }
  }
  return build(w, faces);
}

Mat3d axis_angle_to_matrix(const Vec3d& r) {
  const double angle = r.norm();
  if (angle < 1e-12) return Mat3d::Identity();
  return Eigen::AngleAxisd(angle, r / angle).toRotationMatrix();
}

Vec3d canonicalize_axis_angle(const Vec3d& r) {
  double angle = r.norm();
  if (angle < 1e-12) return Vec3d::Zero();
  Vec3d axis = r / angle;
  angle = std::fmod(angle, 2 * std::numbers::pi);
  if (angle < 0) angle += 2 * std::numbers::pi;
  if (angle > std::numbers::pi) {
    angle = 2 * std::numbers::pi - angle;
    axis = -axis;
  }
  return axis * angle;
}

double geodesic_angle(const Vec3d& r1, const Vec3d& r2) {
  const Mat3d R = axis_angle_to_matrix(r1).transpose() * axis_angle_to_matrix(r2);
  const double c = std::clamp(0.5 * (R.trace() - 1.0), -1.0, 1.0);
  return std::acos(c);
}

MatXd box_corners(const Box3d& b) {
  MatXd out(8, 3);
  for (int i = 0; i < 8; ++i) {
    out(i, 0) = (i & 1) ? b.max().x() : b.min().x();
    out(i, 1) = (i & 2) ? b.max().y() : b.min().y();
    out(i, 2) = (i & 4) ? b.max().z() : b.min().z();
  }
  return out;
}

}  // namespace sdfhoi
