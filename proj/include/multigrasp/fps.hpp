#pragma once

#include <span>
#include <vector>

#include "multigrasp/spatial_index.hpp"

namespace multigrasp {

// Deterministic greedy farthest point sampling over `subset`.
//
// The first pick is the subset point closest to the subset centroid; each
// later pick maximizes the squared distance to the nearest already-selected
// point. All ties go to the lowest point index. Returns indices in pick order.
// Throws if m > |subset|, an index is out of range or repeated.
std::vector<PointIndex> farthest_point_sampling(const PointCloud& cloud,
                                                std::span<const PointIndex> subset,
                                                std::size_t m);

// Same, also reporting the greedy min-distance (not squared) at each pick;
// entry 0 is +inf.
std::vector<PointIndex> farthest_point_sampling(const PointCloud& cloud,
                                                std::span<const PointIndex> subset,
                                                std::size_t m,
                                                std::vector<double>* pick_distances);

}  // namespace multigrasp
