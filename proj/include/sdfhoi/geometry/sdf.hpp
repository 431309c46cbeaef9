#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "sdfhoi/core/errors.hpp"
#include "sdfhoi/core/types.hpp"
#include "sdfhoi/geometry/mesh.hpp"

namespace sdfhoi {

// Closest point on triangle (a,b,c) to p, by Voronoi-region classification.
template <class S>
Vec3<S> closest_point_on_triangle(const Vec3<S>& p, const Vec3<S>& a,
                                  const Vec3<S>& b, const Vec3<S>& c) {
  const Vec3<S> ab = b - a, ac = c - a, ap = p - a;
  const S d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= S(0) && d2 <= S(0)) return a;

  const Vec3<S> bp = p - b;
  const S d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= S(0) && d4 <= d3) return b;

  const S vc = d1 * d4 - d3 * d2;
  if (vc <= S(0) && d1 >= S(0) && d3 <= S(0)) return a + (d1 / (d1 - d3)) * ab;

  const Vec3<S> cp = p - c;
  const S d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= S(0) && d5 <= d6) return c;

  const S vb = d5 * d2 - d1 * d6;
  if (vb <= S(0) && d2 >= S(0) && d6 <= S(0)) return a + (d2 / (d2 - d6)) * ac;

  const S va = d3 * d6 - d5 * d4;
  if (va <= S(0) && (d4 - d3) >= S(0) && (d5 - d6) >= S(0))
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);

  const S denom = S(1) / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

// Signed distance to a capsule around segment [a, b] with radius rho:
// ||p - clamp-projection onto the segment|| - rho.
template <class S>
S capsule_signed_distance(const Vec3<S>& p, const Vec3<S>& a, const Vec3<S>& b,
                          S rho) {
  const Vec3<S> ab = b - a;
  const S len2 = ab.squaredNorm();
  S t = len2 > S(0) ? ab.dot(p - a) / len2 : S(0);
  t = std::clamp(t, S(0), S(1));
  return (p - (a + t * ab)).norm() - rho;
}

struct Capsule {
  Vec3d a, b;
  double radius;
};

// min over capsules; exact outside the union, a conservative (too-small)
// magnitude inside overlap regions.
inline double capsule_union_distance(const Vec3d& p, const std::vector<Capsule>& caps) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& c : caps)
    d = std::min(d, capsule_signed_distance<double>(p, c.a, c.b, c.radius));
  return d;
}

inline Box3d capsule_union_bounds(const std::vector<Capsule>& caps) {
  Box3d b;
  for (const auto& c : caps) {
    b.extend(Vec3d(c.a.array() - c.radius));
    b.extend(Vec3d(c.a.array() + c.radius));
    b.extend(Vec3d(c.b.array() - c.radius));
    b.extend(Vec3d(c.b.array() + c.radius));
  }
  return b;
}

// Solid angle of triangle (a,b,c) seen from the origin (van Oosterom &
// Strackee), used for generalized winding numbers.
inline double triangle_solid_angle(const Vec3d& a, const Vec3d& b, const Vec3d& c) {
  const double la = a.norm(), lb = b.norm(), lc = c.norm();
  const double num = a.dot(b.cross(c));
  const double den =
      la * lb * lc + a.dot(b) * lc + b.dot(c) * la + c.dot(a) * lb;
  return 2.0 * std::atan2(num, den);
}

// Reference implementation: loops over every triangle. This is the oracle the
// accelerated path is tested against; keep it free of any shared machinery.
inline double brute_force_signed_distance(const Vec3d& p, const TriMesh& m) {
  double best2 = std::numeric_limits<double>::infinity();
  double winding = 0;
  for (Eigen::Index f = 0; f < m.F.rows(); ++f) {
    const Vec3d a = m.V.row(m.F(f, 0)), b = m.V.row(m.F(f, 1)), c = m.V.row(m.F(f, 2));
    best2 = std::min(best2, (p - closest_point_on_triangle<double>(p, a, b, c)).squaredNorm());
    winding += triangle_solid_angle(a - p, b - p, c - p);
  }
  winding /= 4.0 * std::numbers::pi;
  const double d = std::sqrt(best2);
  return winding > 0.5 ? -d : d;
}

// Exact signed distance queries against a watertight mesh: BVH-accelerated
// nearest triangle for the magnitude, generalized winding number for the
// sign. Immutable after construction; concurrent queries are safe.
class MeshSdf {
 public:
  explicit MeshSdf(TriMesh mesh) : mesh_(std::move(mesh)) {
    std::string reason;
    if (!is_watertight(mesh_, &reason))
      throw ContractError("MeshSdf requires a watertight mesh: " + reason);
    build();
  }

  const TriMesh& mesh() const { return mesh_; }

  // Unsigned distance and (optionally) the nearest triangle index.
  double unsigned_distance(const Vec3d& p, int* nearest_tri = nullptr) const {
    double best2 = std::numeric_limits<double>::infinity();
    int best_tri = -1;
    nearest(0, p, best2, best_tri);
    if (nearest_tri) *nearest_tri = best_tri;
    return std::sqrt(best2);
  }

  double winding_number(const Vec3d& p) const {
    double w = 0;
    for (Eigen::Index f = 0; f < mesh_.F.rows(); ++f)
      w += triangle_solid_angle(Vec3d(mesh_.V.row(mesh_.F(f, 0))) - p,
                                Vec3d(mesh_.V.row(mesh_.F(f, 1))) - p,
                                Vec3d(mesh_.V.row(mesh_.F(f, 2))) - p);
    return w / (4.0 * std::numbers::pi);
  }

  // Signed distance: negative inside. Points whose winding number is
  // numerically on-surface (within 0.05 of the 0.5 threshold) take their sign
  // from the nearest triangle's normal instead.
  double operator()(const Vec3d& p) const {
    int tri = -1;
    const double d = unsigned_distance(p, &tri);
    const double w = winding_number(p);
    if (w > 0.45 && w < 0.55) {
      const Vec3d a = mesh_.V.row(mesh_.F(tri, 0)), b = mesh_.V.row(mesh_.F(tri, 1)),
                  c = mesh_.V.row(mesh_.F(tri, 2));
      const Vec3d n = (b - a).cross(c - a);
      const Vec3d q = closest_point_on_triangle<double>(p, a, b, c);
      return n.dot(p - q) < 0 ? -d : d;
    }
    return w > 0.5 ? -d : d;
  }

  // First-hit ray intersection (Moller-Trumbore over the BVH).
  bool ray_hit(const Vec3d& origin, const Vec3d& dir, double* t_out = nullptr) const {
    double best_t = std::numeric_limits<double>::infinity();
    raycast(0, origin, dir, best_t);
    if (!std::isfinite(best_t)) return false;
    if (t_out) *t_out = best_t;
    return true;
  }

 private:
  struct Node {
    Box3d box;
    int left = -1, right = -1;  // children; leaf when left < 0
    int begin = 0, end = 0;     // triangle range for leaves
  };

  void build() {
    const auto nf = mesh_.F.rows();
    order_.resize(static_cast<std::size_t>(nf));
    std::iota(order_.begin(), order_.end(), 0);
    centroids_.resize(nf, 3);
    for (Eigen::Index f = 0; f < nf; ++f)
      centroids_.row(f) = (mesh_.V.row(mesh_.F(f, 0)) + mesh_.V.row(mesh_.F(f, 1)) +
                           mesh_.V.row(mesh_.F(f, 2))) /
                          3.0;
    nodes_.reserve(static_cast<std::size_t>(2 * nf / kLeafSize + 2));
    build_node(0, static_cast<int>(nf));
  }

  int build_node(int begin, int end) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    Box3d box;
    Box3d cbox;
    for (int i = begin; i < end; ++i) {
      const int f = order_[static_cast<std::size_t>(i)];
      for (int k = 0; k < 3; ++k) box.extend(Vec3d(mesh_.V.row(mesh_.F(f, k))));
      cbox.extend(Vec3d(centroids_.row(f)));
    }
    nodes_[id].box = box;
    if (end - begin <= kLeafSize) {
      nodes_[id].begin = begin;
      nodes_[id].end = end;
      return id;
    }
    int axis;
    cbox.sizes().maxCoeff(&axis);
    const int mid = (begin + end) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid,
                     order_.begin() + end, [&](int fa, int fb) {
                       return centroids_(fa, axis) < centroids_(fb, axis);
                     });
    const int l = build_node(begin, mid);
    const int r = build_node(mid, end);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  void nearest(int node, const Vec3d& p, double& best2, int& best_tri) const {
    const Node& n = nodes_[static_cast<std::size_t>(node)];
    if (n.box.squaredExteriorDistance(p) > best2) return;
    if (n.left < 0) {
      for (int i = n.begin; i < n.end; ++i) {
        const int f = order_[static_cast<std::size_t>(i)];
        const Vec3d a = mesh_.V.row(mesh_.F(f, 0)), b = mesh_.V.row(mesh_.F(f, 1)),
                    c = mesh_.V.row(mesh_.F(f, 2));
        const double d2 = (p - closest_point_on_triangle<double>(p, a, b, c)).squaredNorm();
        if (d2 < best2) {
          best2 = d2;
          best_tri = f;
        }
      }
      return;
    }
    const double dl = nodes_[static_cast<std::size_t>(n.left)].box.squaredExteriorDistance(p);
    const double dr = nodes_[static_cast<std::size_t>(n.right)].box.squaredExteriorDistance(p);
    if (dl < dr) {
      nearest(n.left, p, best2, best_tri);
      nearest(n.right, p, best2, best_tri);
    } else {
      nearest(n.right, p, best2, best_tri);
      nearest(n.left, p, best2, best_tri);
    }
  }

  static bool box_hits_ray(const Box3d& box, const Vec3d& o, const Vec3d& d, double tmax) {
    double t0 = 0, t1 = tmax;
    for (int k = 0; k < 3; ++k) {
      const double inv = 1.0 / d[k];
      double lo = (box.min()[k] - o[k]) * inv;
      double hi = (box.max()[k] - o[k]) * inv;
      if (inv < 0) std::swap(lo, hi);
      t0 = std::max(t0, lo);
      t1 = std::min(t1, hi);
      if (t0 > t1) return false;
    }
    return true;
  }

  void raycast(int node, const Vec3d& o, const Vec3d& d, double& best_t) const {
    const Node& n = nodes_[static_cast<std::size_t>(node)];
    if (!box_hits_ray(n.box, o, d, best_t)) return;
    if (n.left >= 0) {
      raycast(n.left, o, d, best_t);
      raycast(n.right, o, d, best_t);
      return;
    }
    for (int i = n.begin; i < n.end; ++i) {
      const int f = order_[static_cast<std::size_t>(i)];
      const Vec3d a = mesh_.V.row(mesh_.F(f, 0)), b = mesh_.V.row(mesh_.F(f, 1)),
                  c = mesh_.V.row(mesh_.F(f, 2));
      const Vec3d e1 = b - a, e2 = c - a;
      const Vec3d pv = d.cross(e2);
      const double det = e1.dot(pv);
      if (std::abs(det) < 1e-14) continue;
      const double inv = 1.0 / det;
      const Vec3d tv = o - a;
      const double u = tv.dot(pv) * inv;
      if (u < 0 || u > 1) continue;
      const Vec3d qv = tv.cross(e1);
      const double v = d.dot(qv) * inv;
      if (v < 0 || u + v > 1) continue;
      const double t = e2.dot(qv) * inv;
      if (t > 1e-9 && t < best_t) best_t = t;
    }
  }

  static constexpr int kLeafSize = 4;
  TriMesh mesh_;
  MatXd centroids_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
};

}  // namespace sdfhoi
