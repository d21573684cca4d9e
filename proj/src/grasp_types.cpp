#include <cmath>
#include <string>

#include "multigrasp/error.hpp"
#include "multigrasp/grasp.hpp"

namespace multigrasp {

std::string_view to_string(Gripper g) { return g == Gripper::parallel ? "parallel" : "vacuum"; }

Gripper parse_gripper(std::string_view name) {
  if (name == "parallel") return Gripper::parallel;
  if (name == "vacuum") return Gripper::vacuum;
  throw SchemaError("unknown gripper '" + std::string(name) + "'");
}

const Point3& GroundTruthGrasp::center() const {
  return std::visit([](const auto& g) -> const Point3& { return g.center; }, pose);
}

Vec3 closing_axis(const UnitVector3& approach, double angle_deg) {
  const Vec3& v = approach.vec();
  const Vec3 ref = std::abs(v.x()) < 0.99 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 u0 = (ref - v * ref.dot(v)).normalized();
  const Vec3 u1 = v.cross(u0);
  const double a = deg2rad(angle_deg);
  return std::cos(a) * u0 + std::sin(a) * u1;
}

}  // namespace multigrasp

namespace multigrasp {

double angle_for_axis(const UnitVector3& approach, const Vec3& axis) {
  const Vec3 u0 = closing_axis(approach, 0.0);
  const Vec3 u1 = approach.vec().cross(u0);
  double a = rad2deg(std::atan2(axis.dot(u1), axis.dot(u0)));
  a = std::fmod(a + 360.0, 180.0);
  return a >= 180.0 ? 0.0 : a;
}

}  // namespace multigrasp
