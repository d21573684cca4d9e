#pragma once

// Data-parallel inner loops. Every kernel exists twice: an OpenMP version
// used by the pipeline and a plain serial reference used by tests and the
// benchmark. Both produce bit-identical results (reductions use fixed
// blocks and a fixed combination order, independent of the thread count).

#include <cstddef>
#include <span>
#include <vector>

#include "multigrasp/spatial_index.hpp"

namespace multigrasp::kernels {

// Result of one farthest-point-sampling relaxation pass.
struct ArgMax {
  std::size_t position = 0;
  double value = -1.0;
};

// Local covariance statistics of a radius neighbourhood.
struct NeighborhoodStats {
  std::size_t count = 0;
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
};

NeighborhoodStats neighborhood_stats(const KdTree& index, const Point3& center, double r);

namespace serial {

// min_d2[i] = min(min_d2[i], |points[i] - anchor|^2); returns the position of
// the largest updated value, lowest position on ties.
ArgMax fps_relax(std::span<const Point3> points, const Point3& anchor, std::span<double> min_d2);

// out[i] = index.nearest(queries[i]).
void nearest_batch(const KdTree& index, std::span<const Point3> queries, std::span<PointIndex> out);

// out[i] = neighborhood_stats(index, queries[i], r).
void neighborhood_batch(const KdTree& index, std::span<const Point3> queries, double r,
                        std::span<NeighborhoodStats> out);

}  // namespace serial

namespace parallel {

ArgMax fps_relax(std::span<const Point3> points, const Point3& anchor, std::span<double> min_d2);
void nearest_batch(const KdTree& index, std::span<const Point3> queries, std::span<PointIndex> out);
void neighborhood_batch(const KdTree& index, std::span<const Point3> queries, double r,
                        std::span<NeighborhoodStats> out);

}  // namespace parallel

}  // namespace multigrasp::kernels
