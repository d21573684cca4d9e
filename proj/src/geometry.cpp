#include "multigrasp/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "multigrasp/error.hpp"

namespace multigrasp {

UnitVector3::UnitVector3(const Vec3& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw Error("UnitVector3: zero or non-finite direction");
  v_ = v / n;
}

bool all_finite(const Vec3& v) {
  return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z());
}

double angle_deg(const Vec3& a, const Vec3& b) {
  // atan2 form stays accurate near 0 and 180 degrees.
  return rad2deg(std::atan2(a.cross(b).norm(), a.dot(b)));
}

Vec3 any_orthogonal(const Vec3& v) {
  const Vec3 ref = std::abs(v.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  return (ref - v * (ref.dot(v) / v.squaredNorm())).normalized();
}

}  // namespace multigrasp
