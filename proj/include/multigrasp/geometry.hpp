#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace multigrasp {

using Point3 = Eigen::Vector3d;
using Vec3 = Eigen::Vector3d;

// Direction with unit Euclidean norm (within 1e-9). Construction normalizes.
class UnitVector3 {
 public:
  UnitVector3() : v_(0.0, 0.0, 1.0) {}
  explicit UnitVector3(const Vec3& v);
  UnitVector3(double x, double y, double z) : UnitVector3(Vec3(x, y, z)) {}

  const Vec3& vec() const { return v_; }
  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }
  double dot(const Vec3& o) const { return v_.dot(o); }
  UnitVector3 operator-() const { return UnitVector3(-v_, Trusted{}); }

 private:
  struct Trusted {};
  UnitVector3(const Vec3& v, Trusted) : v_(v) {}
  Vec3 v_;
};

// Rigid transform: p_world = rotation * p_local + translation.
struct RigidPose {
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
  Vec3 translation = Vec3::Zero();

  Point3 to_world(const Point3& p) const { return rotation * p + translation; }
  Point3 to_local(const Point3& p) const {
    return rotation.conjugate() * (p - translation);
  }
  Vec3 dir_to_world(const Vec3& d) const { return rotation * d; }
  Vec3 dir_to_local(const Vec3& d) const { return rotation.conjugate() * d; }
};

bool all_finite(const Vec3& v);

// Angle between two directions in degrees, in [0, 180].
double angle_deg(const Vec3& a, const Vec3& b);

// Some unit vector orthogonal to `v` (deterministic choice).
Vec3 any_orthogonal(const Vec3& v);

constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

}  // namespace multigrasp
