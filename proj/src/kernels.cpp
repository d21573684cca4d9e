#include "multigrasp/kernels.hpp"

#include <omp.h>

#include <algorithm>

namespace multigrasp::kernels {

NeighborhoodStats neighborhood_stats(const KdTree& index, const Point3& center, double r) {
  NeighborhoodStats s;
  const auto members = index.radius_query(center, r);
  s.count = members.size();
  if (members.empty()) return s;
  const auto& pts = index.points();
  for (auto i : members) s.mean += pts[i];
  s.mean /= static_cast<double>(members.size());
  for (auto i : members) {
    const Eigen::Vector3d d = pts[i] - s.mean;
    s.covariance.noalias() += d * d.transpose();
  }
  s.covariance /= static_cast<double>(members.size());
  return s;
}

namespace {

inline void take_better(ArgMax& best, std::size_t pos, double value) {
  if (value > best.value || (value == best.value && pos < best.position)) best = {pos, value};
}

}  // namespace

namespace serial {

ArgMax fps_relax(std::span<const Point3> points, const Point3& anchor, std::span<double> min_d2) {
  ArgMax best;
  for (std::size_t i = 0; i < points.size(); ++i) {
    min_d2[i] = std::min(min_d2[i], squared_distance(points[i], anchor));
    take_better(best, i, min_d2[i]);
  }
  return best;
}

void nearest_batch(const KdTree& index, std::span<const Point3> queries, std::span<PointIndex> out) {
  for (std::size_t i = 0; i < queries.size(); ++i) out[i] = index.nearest(queries[i]);
}

void neighborhood_batch(const KdTree& index, std::span<const Point3> queries, double r,
                        std::span<NeighborhoodStats> out) {
  for (std::size_t i = 0; i < queries.size(); ++i) out[i] = neighborhood_stats(index, queries[i], r);
}

}  // namespace serial

namespace parallel {

ArgMax fps_relax(std::span<const Point3> points, const Point3& anchor, std::span<double> min_d2) {
  const auto n = static_cast<std::ptrdiff_t>(points.size());
  ArgMax best;
#pragma omp parallel
  {
    ArgMax local;
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto u = static_cast<std::size_t>(i);
      min_d2[u] = std::min(min_d2[u], squared_distance(points[u], anchor));
      take_better(local, u, min_d2[u]);
    }
#pragma omp critical
    take_better(best, local.position, local.value);
  }
  return best;
}

void nearest_batch(const KdTree& index, std::span<const Point3> queries, std::span<PointIndex> out) {
  const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = index.nearest(queries[static_cast<std::size_t>(i)]);
  }
}

void neighborhood_batch(const KdTree& index, std::span<const Point3> queries, double r,
                        std::span<NeighborhoodStats> out) {
  const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    out[u] = neighborhood_stats(index, queries[u], r);
  }
}

}  // namespace parallel

}  // namespace multigrasp::kernels
