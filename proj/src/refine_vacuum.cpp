#include "multigrasp/refine_vacuum.hpp"

#include <algorithm>
#include <optional>

#include "multigrasp/error.hpp"

namespace multigrasp {

VacuumRefinement refine_vacuum_poses(const PointCloud& cloud, const KdTree& index, const SeedSet& seeds, double r) {
  if (seeds.gripper != Gripper::vacuum) throw Error("refine_vacuum_poses: seed set is not for the vacuum gripper");
  const auto n = static_cast<std::ptrdiff_t>(seeds.size());
  std::vector<std::optional<VacuumGrasp>> out(seeds.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    const PointIndex seed = seeds.indices[u];
    try {
      out[u] = VacuumGrasp{cloud.points[seed], estimate_normal(index, seed, r, cloud.viewpoint), seeds.fused_scores[u],
                           seed};
    } catch (const DegenerateNeighborhood&) {
    }
  }
  VacuumRefinement result;
  for (auto& g : out) {
    if (g) {
      result.grasps.push_back(*g);
    } else {
      ++result.dropped;
    }
  }
  return result;
}

std::vector<VacuumGrasp> rank_vacuum(std::vector<VacuumGrasp> grasps, std::size_t k) {
  std::stable_sort(grasps.begin(), grasps.end(), [](const VacuumGrasp& a, const VacuumGrasp& b) {
    return a.score > b.score || (a.score == b.score && a.seed < b.seed);
  });
  if (grasps.size() > k) grasps.resize(k);
  return grasps;
}

}  // namespace multigrasp
