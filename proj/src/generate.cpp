#include "sdfhoi/scene/generate.hpp"

#include <cmath>

#include "sdfhoi/core/errors.hpp"
#include "sdfhoi/geometry/supervision.hpp"
#include "sdfhoi/scene/render.hpp"

namespace sdfhoi {

GenConfig GenConfig::from_config(const Config& c) {
  GenConfig g;
  g.image_size = c.get_int("gen.image", g.image_size);
  g.focal_factor = c.get_num("gen.focal", g.focal_factor);
  g.z_min = c.get_num("gen.zmin", g.z_min);
  g.z_max = c.get_num("gen.zmax", g.z_max);
  g.supervision_points = c.get_int("gen.supervision_points", g.supervision_points);
  g.band_mm = c.get_num("gen.band_mm", g.band_mm);
  g.band_fraction = c.get_num("gen.band_fraction", g.band_fraction);
  g.gap_min = c.get_num("gen.gap_min", g.gap_min);
  g.gap_max = c.get_num("gen.gap_max", g.gap_max);
  g.heatmap_sigma = c.get_num("gen.sigma", g.heatmap_sigma);
  g.hand_cell = c.get_num("gen.hand_cell", g.hand_cell);
  return g;
}

void GenConfig::to_config(Config& c) const {
  c.set("gen.image", image_size);
  c.set("gen.focal", focal_factor);
  c.set("gen.zmin", z_min);
  c.set("gen.zmax", z_max);
  c.set("gen.supervision_points", supervision_points);
  c.set("gen.band_mm", band_mm);
  c.set("gen.band_fraction", band_fraction);
  c.set("gen.gap_min", gap_min);
  c.set("gen.gap_max", gap_max);
  c.set("gen.sigma", heatmap_sigma);
  c.set("gen.hand_cell", hand_cell);
}

namespace {

Vec3d random_unit(Rng& rng) {
  double d[3];
  rng.unit_vector(d);
  return {d[0], d[1], d[2]};
}

HandParams sample_hand_params(Rng& rng) {
  HandParams p;
  p.theta.row(0) = (rng.uniform(0.0, 1.35) * random_unit(rng)).transpose();
  for (int f = 0; f < 5; ++f) {
    const bool thumb = f == 0;
    const int base = 1 + 3 * f;
    if (thumb) {
      p.theta.row(base) << rng.uniform(-0.6, 0.5), rng.uniform(-0.3, 0.3),
          rng.uniform(-0.5, 0.5);
      p.theta.row(base + 1) << rng.uniform(-0.8, 0.2), rng.uniform(-0.1, 0.1),
          rng.uniform(-0.1, 0.1);
      p.theta.row(base + 2) << rng.uniform(-0.8, 0.1), rng.uniform(-0.05, 0.05),
          rng.uniform(-0.05, 0.05);
    } else {
      p.theta.row(base) << rng.uniform(-1.1, 0.25), rng.uniform(-0.15, 0.15),
          rng.uniform(-0.25, 0.25);
      p.theta.row(base + 1) << rng.uniform(-1.3, 0.05), rng.uniform(-0.05, 0.05),
          rng.uniform(-0.05, 0.05);
      p.theta.row(base + 2) << rng.uniform(-1.0, 0.05), rng.uniform(-0.05, 0.05),
          rng.uniform(-0.05, 0.05);
    }
  }
  for (int k = 0; k < kShapeCoeffs; ++k) p.beta(k) = rng.uniform(-1.5, 1.5);
  return p;
}

TriMesh sample_object(Rng& rng, int* category) {
  const int cat = static_cast<int>(rng.below(3));
  *category = cat;
  switch (static_cast<ObjectCategory>(cat)) {
    case ObjectCategory::Box:
      return make_box(Vec3d(rng.uniform(45, 95), rng.uniform(45, 95), rng.uniform(45, 95)));
    case ObjectCategory::Cylinder:
      return make_cylinder(rng.uniform(22, 42), rng.uniform(55, 115));
    case ObjectCategory::Can:
    default:
      return make_capped_can(rng.uniform(20, 38), rng.uniform(40, 90));
  }
}

}  // namespace

SceneSample generate_scene(std::uint64_t seed, const GenConfig& cfg) {
  const Camera cam = Camera::simple(cfg.image_size, cfg.focal_factor);
  for (int attempt = 0; attempt < 100; ++attempt) {
    Rng rng = Rng::stream(0x5ce9eULL, seed, attempt);

    const HandParams hp = sample_hand_params(rng);
    const auto& model = HandModel::standard();
    const auto joints_local = forward_kinematics(hp, model);
    const auto capsules = hand_capsules(hp, model);

    int category = 0;
    const TriMesh obj = sample_object(rng, &category);
    const Vec3d obj_rot =
        canonicalize_axis_angle(rng.uniform(0.0, 2.8) * random_unit(rng));
    const Mat3d R = axis_angle_to_matrix(obj_rot);

    // Aim the object at the fingertips and slide it along an approach
    // direction until the surface gap matches the target.
    Vec3d tips = Vec3d::Zero(), palm = Vec3d::Zero();
    for (int f = 0; f < 5; ++f) {
      tips += joints_local.row(4 * f + 4).transpose();
      palm += joints_local.row(4 * f + 1).transpose();
    }
    tips /= 5;
    palm = (palm / 5 + joints_local.row(0).transpose()) / 2;
    const Vec3d approach = (tips - palm + 0.35 * (tips - palm).norm() * random_unit(rng)).normalized();
    const double target_gap = rng.uniform(cfg.gap_min, cfg.gap_max);

    Rng srng = Rng::stream(0x0b7ec7ULL, seed, attempt);
    const MatXd surf = sample_surface(obj, 150, srng);
    auto gap_at = [&](double t) {
      const Vec3d center = tips + t * approach;
      double g = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < surf.rows(); ++i) {
        const Vec3d q = R * surf.row(i).transpose() + center;
        g = std::min(g, capsule_union_distance(q, capsules));
      }
      return g;
    };
    double t_lo = -80, t_hi = -80;
    bool bracketed = false;
    double prev = gap_at(t_lo);
    for (double t = -70; t <= 420; t += 10) {
      const double g = gap_at(t);
      if (prev < target_gap && g >= target_gap) {
        t_lo = t - 10;
        t_hi = t;
        bracketed = true;
        break;
      }
      prev = g;
    }
    if (!bracketed) continue;
    for (int it = 0; it < 30; ++it) {
      const double mid = 0.5 * (t_lo + t_hi);
      (gap_at(mid) < target_gap ? t_lo : t_hi) = mid;
    }
    const Vec3d obj_center_local = tips + 0.5 * (t_lo + t_hi) * approach;

    // Place the assembly in front of the camera.
    const double z = rng.uniform(cfg.z_min, cfg.z_max);
    const double u = cam.cx() + rng.uniform(-0.1, 0.1) * cam.width;
    const double v = cam.cy() + rng.uniform(-0.1, 0.1) * cam.height;
    Vec3d centroid = joints_local.colwise().mean().transpose();
    centroid = 0.5 * (centroid + obj_center_local);
    const Vec3d target((u - cam.cx()) * z / cam.fx(), (v - cam.cy()) * z / cam.fy(), z);
    const Vec3d T = target - centroid;

    const MatXd joints_cam = joints_local.rowwise() + T.transpose();
    const Vec3d obj_t = obj_center_local + T;

    bool visible = true;
    for (Eigen::Index j = 0; j < joints_cam.rows() && visible; ++j) {
      const Vec3d p = joints_cam.row(j);
      visible = p.z() > 100.0 && cam.inside(cam.project(p), 4.0);
    }
    const TriMesh obj_cam = transformed(obj, R, obj_t);
    const Box3d ob = mesh_bounds(obj_cam);
    const MatXd corners = box_corners(ob);
    for (Eigen::Index i = 0; i < 8 && visible; ++i) {
      const Vec3d p = corners.row(i);
      visible = p.z() > 100.0 && cam.inside(cam.project(p), 2.0);
    }
    if (!visible) continue;

    TriMesh hand_cam = hand_surface(hp, model, cfg.hand_cell);
    hand_cam.V.rowwise() += T.transpose();

    auto rendered = render_scene(hand_cam, obj_cam, joints_cam, cam, cfg.heatmap_sigma);
    if (rendered.targets.hand_mask.sum() < 30.0f || rendered.targets.obj_mask.sum() < 8.0f)
      continue;

    SceneSample s;
    s.id = seed;
    s.camera = cam;
    s.image = std::move(rendered.channels);
    s.hand_params = hp;
    s.hand_joints = joints_cam;
    s.hand_mesh = std::move(hand_cam);
    s.object_mesh = obj;
    s.object_category = category;
    s.object_rot = obj_rot;
    s.object_trans = obj_t;
    s.targets = std::move(rendered.targets);

    const MeshSdf hand_sdf(s.hand_mesh);
    const MeshSdf obj_sdf(s.posed_object());
    Rng prng = Rng::stream(0x9017e5ULL, seed, attempt);
    auto sup = sample_supervision_points(hand_sdf, obj_sdf, s.workspace(),
                                         cfg.supervision_points, prng, cfg.band_mm,
                                         cfg.band_fraction);
    s.sdf_points = std::move(sup.points);
    s.sdf_dists = std::move(sup.dists);
    return s;
  }
  throw GenerationError("generate_scene: no valid configuration after 100 attempts (seed " +
                        std::to_string(seed) + ")");
}

// --------------------------------------------------------------------------
// serialization

Bundle SceneSample::to_bundle() const {
  Bundle b;
  b.add(make_scalar_u64("id", id));
  b.add(make_array_f32("cam/k", MatXd(camera.K)));
  MatXd wh(1, 2);
  wh << camera.width, camera.height;
  b.add(make_array_f32("cam/wh", wh));
  for (std::size_t c = 0; c < image.size(); ++c)
    b.add(make_array_f32("img/" + std::to_string(c), image[c]));
  b.add(make_array_f32("hand/theta", MatXd(hand_params.theta)));
  b.add(make_array_f32("hand/beta", MatXd(hand_params.beta)));
  b.add(make_array_f32("hand/joints", hand_joints));
  b.add(make_array_f32("hand/mesh_v", hand_mesh.V));
  b.add(make_array_i32("hand/mesh_f", hand_mesh.F));
  b.add(make_array_f32("obj/mesh_v", object_mesh.V));
  b.add(make_array_i32("obj/mesh_f", object_mesh.F));
  b.add(make_scalar_u64("obj/category", static_cast<std::uint64_t>(object_category)));
  b.add(make_array_f32("obj/rot", MatXd(object_rot.transpose())));
  b.add(make_array_f32("obj/trans", MatXd(object_trans.transpose())));
  b.add(make_array_f32("tgt/heatmap", targets.heatmap));
  b.add(make_array_f32("tgt/hand_mask", targets.hand_mask));
  b.add(make_array_f32("tgt/obj_mask", targets.obj_mask));
  b.add(make_array_f32("sdf/points", sdf_points));
  b.add(make_array_f32("sdf/dists", sdf_dists));
  return b;
}

SceneSample SceneSample::from_bundle(const Bundle& b) {
  SceneSample s;
  s.id = array_to_u64(b.get("id"));
  s.camera.K = array_to_matd(b.get("cam/k"));
  const MatXd wh = array_to_matd(b.get("cam/wh"));
  s.camera.width = static_cast<int>(wh(0, 0));
  s.camera.height = static_cast<int>(wh(0, 1));
  for (std::size_t c = 0; b.has("img/" + std::to_string(c)); ++c)
    s.image.push_back(array_to_matf(b.get("img/" + std::to_string(c))));
  s.hand_params.theta = array_to_matd(b.get("hand/theta"));
  s.hand_params.beta = array_to_matd(b.get("hand/beta"));
  s.hand_joints = array_to_matd(b.get("hand/joints"));
  s.hand_mesh.V = array_to_matd(b.get("hand/mesh_v"));
  s.hand_mesh.F = array_to_mat3i(b.get("hand/mesh_f"));
  s.object_mesh.V = array_to_matd(b.get("obj/mesh_v"));
  s.object_mesh.F = array_to_mat3i(b.get("obj/mesh_f"));
  s.object_category = static_cast<int>(array_to_u64(b.get("obj/category")));
  s.object_rot = array_to_matd(b.get("obj/rot")).row(0).transpose();
  s.object_trans = array_to_matd(b.get("obj/trans")).row(0).transpose();
  s.targets.heatmap = array_to_matf(b.get("tgt/heatmap"));
  s.targets.hand_mask = array_to_matf(b.get("tgt/hand_mask"));
  s.targets.obj_mask = array_to_matf(b.get("tgt/obj_mask"));
  s.sdf_points = array_to_matd(b.get("sdf/points"));
  s.sdf_dists = array_to_matd(b.get("sdf/dists"));
  return s;
}

void save_dataset(const std::string& path, const std::vector<SceneSample>& scenes) {
  ContainerWriter w(path, FileKind::Dataset);
  Bundle meta;
  meta.add(make_scalar_u64("count", scenes.size()));
  w.add_record("meta", meta);
  char name[32];
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    std::snprintf(name, sizeof name, "scene/%06zu", i);
    w.add_record(name, scenes[i].to_bundle());
  }
  w.finish();
}

std::vector<SceneSample> load_dataset(const std::string& path) {
  ContainerReader r(path);
  if (r.kind() != FileKind::Dataset)
    throw IoError("load_dataset: " + path + " is not a dataset container");
  std::vector<SceneSample> out;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r.name(i) == "meta") continue;
    out.push_back(SceneSample::from_bundle(r.read(i)));
  }
  return out;
}

std::uint64_t dataset_hash(const std::string& path) {
  return ContainerReader(path).content_hash();
}

}  // namespace sdfhoi
