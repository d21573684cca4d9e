#include "multigrasp/collision.hpp"

#include <array>
#include <cmath>

#include "multigrasp/error.hpp"

namespace multigrasp {

namespace {

std::vector<Point3> scene_samples(const SceneAnnotation& scene, double spacing, std::vector<int>& ids) {
  std::vector<Point3> pts;
  for (const auto& prim : scene.primitives) {
    for (const auto& s : grid_surface(prim, spacing)) {
      pts.push_back(s.point);
      ids.push_back(prim.object_id);
    }
  }
  // A far-away sentinel keeps the index non-empty for object-free scenes.
  if (pts.empty()) {
    pts.emplace_back(1e6, 1e6, 1e6);
    ids.push_back(0);
  }
  return pts;
}

// Axis-aligned box in a grasp frame (closing b, approach v, height h).
struct FrameBox {
  double b0, b1, v0, v1, h0, h1;
  bool contains(double b, double v, double h) const {
    return b >= b0 && b <= b1 && v >= v0 && v <= v1 && h >= h0 && h <= h1;
  }
};

}  // namespace

CollisionChecker::CollisionChecker(const SceneAnnotation& scene, GripperGeometry gripper, double sample_spacing)
    : scene_(&scene), gripper_(gripper), index_(scene_samples(scene, sample_spacing, sample_object_)) {}

bool CollisionChecker::parallel_collides(const ParallelGrasp& grasp, double t_enter, double t_exit) const {
  const auto& g = gripper_;
  const Vec3 b = closing_axis(grasp.approach, grasp.angle_deg);
  const Vec3 v = grasp.approach.vec();
  const Vec3 h = v.cross(b);
  const Point3 q = jaw_center(grasp);
  const double outer = 0.5 * grasp.width + g.finger_thickness;
  const double hh = 0.5 * g.finger_height;

  const std::array<FrameBox, 3> boxes = {{
      {-outer, t_enter - g.contact_clearance, -g.finger_length, g.tip_extension, -hh, hh},
      {t_exit + g.contact_clearance, outer, -g.finger_length, g.tip_extension, -hh, hh},
      {-outer, outer, -g.finger_length - g.palm_thickness, -g.finger_length, -hh, hh},
  }};

  for (const auto& box : boxes) {
    for (double bb : {box.b0, box.b1}) {
      for (double vv : {box.v0, box.v1}) {
        for (double hv : {box.h0, box.h1}) {
          if (box.b0 > box.b1) continue;
          const Point3 corner = q + bb * b + vv * v + hv * h;
          if (corner.z() < scene_->table_height - 1e-9) return true;
        }
      }
    }
  }

  const auto& pts = index_.points();
  for (const auto& box : boxes) {
    if (box.b0 > box.b1) continue;
    const double cb = 0.5 * (box.b0 + box.b1), cv = 0.5 * (box.v0 + box.v1), ch = 0.5 * (box.h0 + box.h1);
    const double reach = 0.5 * std::sqrt((box.b1 - box.b0) * (box.b1 - box.b0) + (box.v1 - box.v0) * (box.v1 - box.v0) +
                                         (box.h1 - box.h0) * (box.h1 - box.h0));
    const Point3 mid = q + cb * b + cv * v + ch * h;
    const bool hit = index_.any_within(mid, reach, [&](PointIndex i) {
      const Vec3 d = pts[i] - q;
      return box.contains(d.dot(b), d.dot(v), d.dot(h));
    });
    if (hit) return true;
  }
  return false;
}

bool CollisionChecker::parallel_collides(const ParallelGrasp& grasp) const {
  double t0 = 0.0, t1 = 0.0;
  try {
    const auto contact = parallel_contact(*scene_, grasp);
    t0 = contact.t_enter;
    t1 = contact.t_exit;
  } catch (const NoContact&) {
  }
  return parallel_collides(grasp, t0, t1);
}

bool CollisionChecker::vacuum_collides(const VacuumGrasp& grasp) const {
  const auto& g = gripper_;
  const Vec3 n = grasp.normal.vec();
  const double radial_z = std::sqrt(std::max(0.0, 1.0 - n.z() * n.z()));
  const double lowest = grasp.center.z() + std::min(0.0, g.cup_height * n.z()) - g.cup_radius * radial_z;
  if (lowest < scene_->table_height - 1e-9) return true;

  const Point3 mid = grasp.center + 0.5 * g.cup_height * n;
  const double reach = std::hypot(0.5 * g.cup_height, g.cup_radius);
  const auto& pts = index_.points();
  return index_.any_within(mid, reach, [&](PointIndex i) {
    const Vec3 d = pts[i] - grasp.center;
    const double along = d.dot(n);
    return along >= g.cup_clearance && along <= g.cup_height && (d - along * n).norm() <= g.cup_radius;
  });
}

}  // namespace multigrasp
