#pragma once

#include <vector>

#include "multigrasp/grasp.hpp"
#include "multigrasp/point_cloud.hpp"
#include "multigrasp/scene.hpp"

namespace multigrasp {

enum class MapRole { label, prediction };

// Per-point objectness and per-gripper graspness, all of cloud length.
struct GraspnessMaps {
  std::vector<double> objectness;
  std::vector<double> parallel;
  std::vector<double> vacuum;
  MapRole role = MapRole::label;

  std::size_t size() const { return objectness.size(); }
  const std::vector<double>& graspness(Gripper g) const { return g == Gripper::parallel ? parallel : vacuum; }
};

struct LabelConfig {
  double seal_threshold = 0.004;    // vacuum grasps below are unsuccessful
  double vacuum_cutoff = 0.1;       // rescaled vacuum values below become 0
  double mu_max = 1.0;              // parallel graspness = 1 - mu / mu_max
  // Points farther than this from every surviving grasp point get 0.
  double association_radius = 0.01;
  bool check_collisions = true;
  GripperGeometry gripper;
};

// Supervised maps from ground-truth grasps:
//   1. drop grasps colliding with the scene
//   2. drop vacuum grasps with seal below seal_threshold
//   3. only object points at or above the table get graspness
//   4. each remaining point takes the value of its nearest grasp point
//      (per gripper, best quality when several grasps share a point)
//   5. vacuum: per-scene min-max rescale over associated points, then values
//      below vacuum_cutoff -> 0; parallel: clamp(1 - mu / mu_max, 0, 1)
// Throws if `grasps` is empty or the annotation does not match the cloud.
GraspnessMaps build_label_maps(const PointCloud& cloud, const SceneAnnotation& scene,
                               const std::vector<GroundTruthGrasp>& grasps, const LabelConfig& cfg = {});

// Every target point inherits all channels of its nearest source point.
GraspnessMaps project_map_to_cloud(const GraspnessMaps& maps, const PointCloud& source, const PointCloud& target);

}  // namespace multigrasp
