#pragma once

#include <cstddef>
#include <vector>

#include "multigrasp/geometry.hpp"

namespace multigrasp {

// Ordered scene points (indices are identities) plus the sensor origin.
struct PointCloud {
  std::vector<Point3> points;
  Point3 viewpoint = Point3::Zero();

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  const Point3& operator[](std::size_t i) const { return points[i]; }
};

// Throws if the cloud is empty or holds non-finite coordinates.
void validate(const PointCloud& cloud);

Point3 centroid(const std::vector<Point3>& points);

}  // namespace multigrasp
