#pragma once

#include "multigrasp/kernels.hpp"
#include "multigrasp/spatial_index.hpp"

namespace multigrasp {

constexpr double kDefaultNormalRadius = 0.01;

struct LocalSurface {
  UnitVector3 normal;
  // Smallest eigenvalue over the eigenvalue sum, 0 for a perfect plane.
  double curvature = 0.0;
  std::size_t neighbor_count = 0;
};

// Plane fit of a covariance; normal oriented so dot(n, viewpoint - center) >= 0.
// Throws DegenerateNeighborhood when count < 3 or the middle eigenvalue is
// not above 1e-12.
LocalSurface fit_local_surface(const kernels::NeighborhoodStats& stats, const Point3& center,
                               const Point3& viewpoint);

// Covariance normal of the radius-r neighbourhood of point `seed`.
UnitVector3 estimate_normal(const SpatialIndex& index, PointIndex seed, double r,
                            const Point3& viewpoint);

}  // namespace multigrasp
