#include "multigrasp/normals.hpp"

#include <Eigen/Eigenvalues>
#include <string>

#include "multigrasp/error.hpp"

namespace multigrasp {

namespace {
constexpr double kRankEpsilon = 1e-12;
}

LocalSurface fit_local_surface(const kernels::NeighborhoodStats& stats, const Point3& center,
                               const Point3& viewpoint) {
  if (stats.count < 3) {
    throw DegenerateNeighborhood("neighbourhood holds " + std::to_string(stats.count) +
                                 " points, need at least 3");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(stats.covariance);
  const Eigen::Vector3d ev = solver.eigenvalues();  // ascending
  if (!(ev[1] > kRankEpsilon)) throw DegenerateNeighborhood("neighbourhood covariance is rank-deficient");

  Eigen::Vector3d n = solver.eigenvectors().col(0);
  if (n.dot(viewpoint - center) < 0.0) n = -n;
  const double total = ev.sum();
  return LocalSurface{UnitVector3(n), total > 0.0 ? std::max(0.0, ev[0]) / total : 0.0, stats.count};
}

UnitVector3 estimate_normal(const SpatialIndex& index, PointIndex seed, double r,
                            const Point3& viewpoint) {
  const Point3& center = index.points().at(seed);
  return fit_local_surface(kernels::neighborhood_stats(index, center, r), center, viewpoint).normal;
}

}  // namespace multigrasp
