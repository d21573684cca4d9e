#pragma once

// Hand-built scenes for tests.

#include <vector>

#include "multigrasp/grasp.hpp"
#include "multigrasp/primitives.hpp"
#include "multigrasp/scene.hpp"

namespace scripted {

using namespace multigrasp;

inline Primitive sphere(int id, double r, const Vec3& at) {
  Primitive p;
  p.kind = PrimitiveKind::sphere;
  p.dimensions = {r};
  p.pose.translation = at;
  p.object_id = id;
  return p;
}

inline Primitive box(int id, const Vec3& size, const Vec3& at, PrimitiveKind kind = PrimitiveKind::box) {
  Primitive p;
  p.kind = kind;
  p.dimensions = {size.x(), size.y(), size.z()};
  p.pose.translation = at;
  p.object_id = id;
  return p;
}

inline Primitive cylinder(int id, double r, double h, const Vec3& at) {
  Primitive p;
  p.kind = PrimitiveKind::cylinder;
  p.dimensions = {r, h};
  p.pose.translation = at;
  p.object_id = id;
  return p;
}

inline SceneAnnotation scene_with(std::vector<Primitive> prims) {
  SceneAnnotation s;
  s.table.kind = PrimitiveKind::plane_slab;
  s.table.dimensions = {0.44, 0.44, 0.02};
  s.table.pose.translation = Vec3(0, 0, -0.01);
  s.table.object_id = 0;
  s.camera_viewpoint = Point3(0, -0.3, 0.55);
  s.primitives = std::move(prims);
  return s;
}

// Grid samples of the table top and of every camera-facing object surface
// that is not buried in another object. Fills per_point_object_id.
inline PointCloud sample_scene(SceneAnnotation& s, double spacing = 0.004, double table_half = 0.12) {
  PointCloud c;
  c.viewpoint = s.camera_viewpoint;
  s.per_point_object_id.clear();
  auto buried = [&](const Point3& p, int own) {
    for (const auto& q : s.primitives)
      if (q.object_id != own && contains(q, p, -1e-6)) return true;
    return false;
  };
  for (double x = -table_half; x <= table_half + 1e-12; x += spacing)
    for (double y = -table_half; y <= table_half + 1e-12; y += spacing) {
      const Point3 p(x, y, s.table_height);
      if (buried(p, 0)) continue;
      c.points.push_back(p);
      s.per_point_object_id.push_back(0);
    }
  for (const auto& prim : s.primitives)
    for (const auto& smp : grid_surface(prim, spacing)) {
      if (smp.normal.dot(s.camera_viewpoint - smp.point) <= 0.0 || buried(smp.point, prim.object_id)) continue;
      c.points.push_back(smp.point);
      s.per_point_object_id.push_back(prim.object_id);
    }
  return c;
}

inline ParallelGrasp top_down_grasp(const Point3& center, double depth, double width, double angle) {
  ParallelGrasp g;
  g.center = center;
  g.approach = UnitVector3(0, 0, -1);
  g.depth = depth;
  g.width = width;
  g.angle_deg = angle;
  return g;
}

}  // namespace scripted
