#pragma once

#include <string_view>
#include <variant>

#include "multigrasp/geometry.hpp"
#include "multigrasp/spatial_index.hpp"

namespace multigrasp {

enum class Gripper { parallel, vacuum };

std::string_view to_string(Gripper g);
Gripper parse_gripper(std::string_view name);

// Parallel-jaw pose. `center` is the grasp point on the surface; the jaws
// close along closing_axis(approach, angle_deg) through jaw_center(), which
// lies `depth` meters past the center along the approach direction.
struct ParallelGrasp {
  Point3 center = Point3::Zero();
  UnitVector3 approach;
  double angle_deg = 0.0;  // in-plane rotation, [0, 180)
  double width = 0.0;      // meters, (0, max_width]
  double depth = 0.0;      // meters
  double score = 0.0;      // [0, 1]
  PointIndex seed = 0;
};

// Suction pose: cup center, outward surface normal, score.
struct VacuumGrasp {
  Point3 center = Point3::Zero();
  UnitVector3 normal;
  double score = 0.0;
  PointIndex seed = 0;
};

// Ground-truth grasp with its oracle coefficient: required friction for
// parallel grasps (lower is better), seal coefficient for vacuum grasps.
struct GroundTruthGrasp {
  std::variant<ParallelGrasp, VacuumGrasp> pose;
  double quality_coeff = 0.0;

  Gripper gripper() const { return pose.index() == 0 ? Gripper::parallel : Gripper::vacuum; }
  const Point3& center() const;
};

// Physical gripper dimensions used by collision and width checks.
struct GripperGeometry {
  double max_width = 0.1;
  double finger_thickness = 0.01;
  double finger_height = 0.02;
  double finger_length = 0.05;
  double tip_extension = 0.005;
  double palm_thickness = 0.01;
  // Free gap kept between a finger and its contact before calling it a hit.
  double contact_clearance = 0.0015;
  double cup_radius = 0.01;
  double cup_height = 0.05;
  double cup_clearance = 0.003;
};

// Unit vector along which the jaws close, orthogonal to `approach`.
// angle 0 is the world x axis projected onto the approach plane (y when the
// approach is near-parallel to x); positive angles rotate about the approach.
Vec3 closing_axis(const UnitVector3& approach, double angle_deg);

inline Point3 jaw_center(const ParallelGrasp& g) { return g.center + g.depth * g.approach.vec(); }

}  // namespace multigrasp

namespace multigrasp {

// Inverse of closing_axis: the in-plane angle in [0, 180) whose closing axis
// is parallel (up to sign) to `axis` projected onto the approach plane.
double angle_for_axis(const UnitVector3& approach, const Vec3& axis);

}  // namespace multigrasp
