#pragma once

#include <vector>

#include "multigrasp/grasp.hpp"
#include "multigrasp/scene.hpp"
#include "multigrasp/spatial_index.hpp"

namespace multigrasp {

// Conservative gripper/scene interference test against dense full-surface
// samples of every object (not just the visible cloud) plus the analytic
// table plane.
//
// Parallel: the two finger boxes swept from the open width to their contacts
// (stopping `contact_clearance` short) and the palm box behind them.
// Vacuum: the cup cylinder above the surface (from `cup_clearance` to
// `cup_height` along the normal).
class CollisionChecker {
 public:
  CollisionChecker(const SceneAnnotation& scene, GripperGeometry gripper = {}, double sample_spacing = 0.004);

  const GripperGeometry& gripper() const { return gripper_; }

  // t_enter / t_exit: contacts along the closing axis (from parallel_contact).
  bool parallel_collides(const ParallelGrasp& grasp, double t_enter, double t_exit) const;
  bool parallel_collides(const ParallelGrasp& grasp) const;
  bool vacuum_collides(const VacuumGrasp& grasp) const;

 private:
  const SceneAnnotation* scene_;
  GripperGeometry gripper_;
  std::vector<int> sample_object_;
  KdTree index_;
};

}  // namespace multigrasp
