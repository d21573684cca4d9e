#include "multigrasp/fps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "multigrasp/error.hpp"
#include "multigrasp/kernels.hpp"

namespace multigrasp {

std::vector<PointIndex> farthest_point_sampling(const PointCloud& cloud,
                                                std::span<const PointIndex> subset,
                                                std::size_t m) {
  return farthest_point_sampling(cloud, subset, m, nullptr);
}

std::vector<PointIndex> farthest_point_sampling(const PointCloud& cloud,
                                                std::span<const PointIndex> subset,
                                                std::size_t m,
                                                std::vector<double>* pick_distances) {
  if (m > subset.size()) {
    throw Error("farthest_point_sampling: m=" + std::to_string(m) + " exceeds subset size " +
                std::to_string(subset.size()));
  }
  // Sorted copy: position order == index order, so lowest-position ties are
  // lowest-index ties.
  std::vector<PointIndex> ids(subset.begin(), subset.end());
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw Error("farthest_point_sampling: duplicate index in subset");
  }
  if (!ids.empty() && ids.back() >= cloud.size()) {
    throw Error("farthest_point_sampling: index out of range");
  }
  if (pick_distances) pick_distances->clear();
  if (m == 0) return {};

  std::vector<Point3> pts(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) pts[i] = cloud.points[ids[i]];

  const Point3 c = centroid(pts);
  std::size_t first = 0;
  double first_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d2 = squared_distance(pts[i], c);
    if (d2 < first_d2) {
      first_d2 = d2;
      first = i;
    }
  }

  std::vector<PointIndex> picked;
  picked.reserve(m);
  picked.push_back(ids[first]);
  if (pick_distances) pick_distances->push_back(std::numeric_limits<double>::infinity());

  std::vector<double> min_d2(pts.size(), std::numeric_limits<double>::infinity());
  // Selected points are pinned below any distance so duplicates are never re-picked.
  min_d2[first] = -1.0;
  std::size_t anchor = first;
  while (picked.size() < m) {
    const auto best = kernels::parallel::fps_relax(pts, pts[anchor], min_d2);
    anchor = best.position;
    min_d2[anchor] = -1.0;
    picked.push_back(ids[anchor]);
    if (pick_distances) pick_distances->push_back(std::sqrt(best.value));
  }
  return picked;
}

}  // namespace multigrasp
