#include "multigrasp/scene.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <string>

#include "multigrasp/error.hpp"

namespace multigrasp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxSceneRestarts = 20;

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Random dimensions and resting orientation; translation set by the caller.
Primitive draw_primitive(PrimitiveKind kind, const SynthConfig& cfg, std::mt19937_64& rng) {
  Primitive p;
  p.kind = kind;
  const double s = cfg.dimension_scale;
  const double yaw = uniform(rng, 0.0, 2.0 * kPi);
  Eigen::Quaterniond rot(Eigen::AngleAxisd(yaw, Vec3::UnitZ()));
  double half_height = 0.0;
  switch (kind) {
    case PrimitiveKind::box:
      p.dimensions = {s * uniform(rng, 0.03, 0.06), s * uniform(rng, 0.03, 0.06), s * uniform(rng, 0.03, 0.06)};
      half_height = 0.5 * p.dimensions[2];
      break;
    case PrimitiveKind::sphere:
      p.dimensions = {s * uniform(rng, 0.02, 0.035)};
      half_height = p.dimensions[0];
      break;
    case PrimitiveKind::cylinder: {
      p.dimensions = {s * uniform(rng, 0.01, 0.02), s * uniform(rng, 0.05, 0.1)};
      const bool lying = uniform(rng, 0.0, 1.0) < 0.5;
      if (lying) {
        rot = rot * Eigen::Quaterniond(Eigen::AngleAxisd(0.5 * kPi, Vec3::UnitX()));
        half_height = p.dimensions[0];
      } else {
        half_height = 0.5 * p.dimensions[1];
      }
      break;
    }
    case PrimitiveKind::plane_slab:
      p.dimensions = {s * uniform(rng, 0.08, 0.12), s * uniform(rng, 0.08, 0.12), s * uniform(rng, 0.008, 0.012)};
      half_height = 0.5 * p.dimensions[2];
      break;
  }
  p.pose.rotation = rot.normalized();
  p.pose.translation = Vec3(0.0, 0.0, cfg.table_height + half_height);
  p.friction_coeff = uniform(rng, 0.3, 1.0);
  p.porous = uniform(rng, 0.0, 1.0) < cfg.porosity_probability;
  return p;
}

std::vector<Primitive> place_objects(int n_objects, const SynthConfig& cfg, std::mt19937_64& rng) {
  const double w = cfg.workspace_half_extent;
  for (int restart = 0; restart < kMaxSceneRestarts; ++restart) {
    std::vector<Primitive> placed;
    std::vector<double> radii;
    bool failed = false;
    for (int k = 0; k < n_objects && !failed; ++k) {
      const PrimitiveKind kind =
          cfg.kind_sequence.empty()
              ? cfg.kinds[std::uniform_int_distribution<std::size_t>(0, cfg.kinds.size() - 1)(rng)]
              : cfg.kind_sequence[static_cast<std::size_t>(k) % cfg.kind_sequence.size()];
      bool ok = false;
      for (int attempt = 0; attempt < cfg.max_placement_retries && !ok; ++attempt) {
        Primitive p = draw_primitive(kind, cfg, rng);
        const double fr = footprint_radius(p);
        if (fr >= w) continue;
        p.pose.translation.x() = uniform(rng, -w + fr, w - fr);
        p.pose.translation.y() = uniform(rng, -w + fr, w - fr);
        ok = true;
        for (std::size_t j = 0; j < placed.size() && ok; ++j) {
          const double d = std::hypot(p.pose.translation.x() - placed[j].pose.translation.x(),
                                      p.pose.translation.y() - placed[j].pose.translation.y());
          ok = d >= fr + radii[j] + cfg.placement_gap;
        }
        if (ok) {
          p.object_id = k + 1;
          placed.push_back(std::move(p));
          radii.push_back(fr);
        }
      }
      failed = !ok;
    }
    if (!failed) return placed;
  }
  throw PlacementError("could not place " + std::to_string(n_objects) + " objects without overlap");
}

}  // namespace

const Primitive* SceneAnnotation::find(int object_id) const {
  for (const auto& p : primitives) {
    if (p.object_id == object_id) return &p;
  }
  return nullptr;
}

void validate(const SceneAnnotation& scene, const PointCloud& cloud) {
  if (scene.per_point_object_id.size() != cloud.size()) {
    throw SchemaError("per_point_object_id has " + std::to_string(scene.per_point_object_id.size()) +
                      " entries for a cloud of " + std::to_string(cloud.size()) + " points");
  }
  std::set<int> ids;
  for (const auto& p : scene.primitives) {
    validate(p);
    if (p.object_id < 1) throw SchemaError("primitives: object_id must be >= 1");
    if (!ids.insert(p.object_id).second) throw SchemaError("primitives: duplicate object_id");
  }
  for (int id : scene.per_point_object_id) {
    if (id != 0 && !ids.count(id)) throw SchemaError("per_point_object_id references unknown object " + std::to_string(id));
  }
}

std::pair<PointCloud, SceneAnnotation> generate_scene(std::uint64_t seed, int n_objects, const SynthConfig& cfg) {
  if (n_objects < 1) throw Error("generate_scene: n_objects must be >= 1");
  if (cfg.kinds.empty() && cfg.kind_sequence.empty()) throw Error("generate_scene: no primitive kinds enabled");
  if (!(cfg.density > 0.0)) throw Error("generate_scene: density must be positive");
  std::mt19937_64 rng(seed);

  SceneAnnotation scene;
  scene.table_height = cfg.table_height;
  scene.camera_viewpoint = cfg.camera;
  scene.split = cfg.split;
  scene.table.kind = PrimitiveKind::plane_slab;
  scene.table.dimensions = {cfg.table_size, cfg.table_size, 0.02};
  scene.table.pose.translation = Vec3(0.0, 0.0, cfg.table_height - 0.01);
  scene.table.object_id = 0;
  scene.table.friction_coeff = 0.5;
  scene.primitives = place_objects(n_objects, cfg, rng);

  PointCloud cloud;
  cloud.viewpoint = cfg.camera;

  auto keep = [&](const SurfaceSample& s, int own_id) {
    if (s.normal.dot(cfg.camera - s.point) <= 0.0) return false;
    for (const auto& p : scene.primitives) {
      if (p.object_id != own_id && contains(p, s.point, -1e-6)) return false;
    }
    return true;
  };
  auto emit = [&](const Point3& p, int id) {
    cloud.points.emplace_back(static_cast<float>(p.x()), static_cast<float>(p.y()), static_cast<float>(p.z()));
    scene.per_point_object_id.push_back(id);
  };

  // Table top face only.
  {
    const double half = 0.5 * cfg.table_size;
    const auto n = static_cast<std::size_t>(std::llround(cfg.table_size * cfg.table_size * cfg.density));
    std::uniform_real_distribution<double> u(-half, half);
    for (std::size_t i = 0; i < n; ++i) {
      const SurfaceSample s{Point3(u(rng), u(rng), cfg.table_height), Vec3::UnitZ()};
      if (keep(s, 0)) emit(s.point, 0);
    }
  }
  for (const auto& prim : scene.primitives) {
    const auto n = static_cast<std::size_t>(std::llround(surface_area(prim) * cfg.density));
    for (const auto& s : sample_surface(prim, n, rng)) {
      if (keep(s, prim.object_id)) emit(s.point, prim.object_id);
    }
  }
  return {std::move(cloud), std::move(scene)};
}

ParallelContact parallel_contact(const SceneAnnotation& scene, const Point3& jaw_center, const Vec3& closing_dir,
                                 double width) {
  const double half = 0.5 * width;
  int hits = 0;
  ParallelContact best;
  LineHit best_hit;
  double best_mid = kInf;
  for (const auto& prim : scene.primitives) {
    const auto hit = intersect_line(prim, jaw_center, closing_dir);
    if (!hit || hit->t_exit < -half || hit->t_enter > half) continue;
    ++hits;
    const double mid = std::abs(0.5 * (hit->t_enter + hit->t_exit));
    if (mid < best_mid) {
      best_mid = mid;
      best_hit = *hit;
      best.object_id = prim.object_id;
    }
  }
  if (hits == 0) throw NoContact("closing segment meets no object");
  best.t_enter = best_hit.t_enter;
  best.t_exit = best_hit.t_exit;
  if (hits > 1 || best_hit.t_enter < -half || best_hit.t_exit > half) {
    best.required_friction = kInf;
    return best;
  }
  // Each jaw pushes along its closing direction; the friction cone is
  // centred on the inward normal at its contact.
  auto tan_between = [](const Vec3& push, const Vec3& inward) {
    const double c = push.dot(inward);
    return c > 0.0 ? push.cross(inward).norm() / c : kInf;
  };
  best.required_friction = std::max(tan_between(closing_dir, -best_hit.normal_enter),
                                    tan_between(-closing_dir, -best_hit.normal_exit));
  return best;
}

ParallelContact parallel_contact(const SceneAnnotation& scene, const ParallelGrasp& grasp) {
  return parallel_contact(scene, jaw_center(grasp), closing_axis(grasp.approach, grasp.angle_deg), grasp.width);
}

double oracle_parallel_quality(const SceneAnnotation& scene, const ParallelGrasp& grasp,
                               const GripperGeometry& gripper) {
  if (grasp.width > gripper.max_width + 1e-12) throw Error("grasp width exceeds gripper max width");
  return parallel_contact(scene, grasp).required_friction;
}

int surface_object_at(const SceneAnnotation& scene, const Point3& point, double tolerance) {
  int best = 0;
  double best_d = kInf;
  for (const auto& prim : scene.primitives) {
    const double d = closest_surface_point(prim, point).distance;
    if (d < best_d) {
      best_d = d;
      best = prim.object_id;
    }
  }
  return best_d <= tolerance ? best : 0;
}

double oracle_seal_quality(const SceneAnnotation& scene, const VacuumGrasp& grasp, double cup_radius) {
  const Primitive* prim = scene.find(surface_object_at(scene, grasp.center));
  if (!prim || prim->porous) return 0.0;
  const double rms = surface_rms_deviation(*prim, grasp.center, cup_radius);
  return std::max(0.0, 1.0 - rms / cup_radius);
}

bool oracle_flat_region(const SceneAnnotation& scene, const Point3& point) {
  const Primitive* prim = scene.find(surface_object_at(scene, point));
  return prim && closest_surface_point(*prim, point).planar;
}

}  // namespace multigrasp
