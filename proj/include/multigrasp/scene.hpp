#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "multigrasp/grasp.hpp"
#include "multigrasp/point_cloud.hpp"
#include "multigrasp/primitives.hpp"

namespace multigrasp {

// Synthetic scene ground truth. The table is a plane-slab with object id 0
// whose top face sits at table_height.
struct SceneAnnotation {
  std::vector<Primitive> primitives;
  Primitive table;
  double table_height = 0.0;
  Point3 camera_viewpoint = Point3::Zero();
  std::vector<int> per_point_object_id;
  std::string split = "seen";

  // nullptr for id 0 or unknown ids.
  const Primitive* find(int object_id) const;
};

// Throws if the annotation does not describe `cloud` (length mismatch,
// dangling object ids, bad primitives).
void validate(const SceneAnnotation& scene, const PointCloud& cloud);

struct SynthConfig {
  std::vector<PrimitiveKind> kinds = {PrimitiveKind::box, PrimitiveKind::sphere, PrimitiveKind::plane_slab};
  // When non-empty, object i is of kind kind_sequence[i % size] instead of a
  // uniform draw from `kinds`.
  std::vector<PrimitiveKind> kind_sequence;
  double density = 40000.0;  // surface points per square meter
  double table_height = 0.0;
  double table_size = 0.44;
  double workspace_half_extent = 0.17;
  Point3 camera = Point3(0.0, -0.3, 0.55);
  double dimension_scale = 1.0;
  double porosity_probability = 0.0;
  double placement_gap = 0.005;
  int max_placement_retries = 200;
  std::string split = "seen";
};

// Deterministic single-view scene: objects rest on the table without
// interpenetration; surface samples of uniform density are kept when they
// face the camera and are not inside another solid. Coordinates are rounded
// to float32 so a PLY round trip is lossless.
std::pair<PointCloud, SceneAnnotation> generate_scene(std::uint64_t seed, int n_objects, const SynthConfig& config);

// Contact analysis of a parallel grasp's closing segment.
struct ParallelContact {
  int object_id = 0;
  // +inf when the jaws cannot reach antipodal closure.
  double required_friction = 0.0;
  double t_enter = 0.0, t_exit = 0.0;  // along the closing axis from the jaw center
};

// Throws NoContact when the closing segment meets no object.
ParallelContact parallel_contact(const SceneAnnotation& scene, const Point3& jaw_center, const Vec3& closing_dir,
                                 double width);
ParallelContact parallel_contact(const SceneAnnotation& scene, const ParallelGrasp& grasp);

// Minimum friction coefficient for antipodal closure at the two contacts of
// the closing segment; +inf when closure is impossible (segment only
// partially covers the object, two objects between the jaws, contact normal
// facing away). Throws NoContact, or Error when width exceeds max_width.
double oracle_parallel_quality(const SceneAnnotation& scene, const ParallelGrasp& grasp,
                               const GripperGeometry& gripper = {});

// Object whose surface is nearest `point` within `tolerance`, else 0.
int surface_object_at(const SceneAnnotation& scene, const Point3& point, double tolerance = 0.002);

// max(0, 1 - rms / cup_radius) of the surface within cup_radius of the cup
// center; 0 on porous objects and off-object centers.
double oracle_seal_quality(const SceneAnnotation& scene, const VacuumGrasp& grasp, double cup_radius = 0.01);

// True when the nearest object surface (within 2 mm) is a flat face.
bool oracle_flat_region(const SceneAnnotation& scene, const Point3& point);

}  // namespace multigrasp
