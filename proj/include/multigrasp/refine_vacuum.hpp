#pragma once

#include <vector>

#include "multigrasp/grasp.hpp"
#include "multigrasp/normals.hpp"
#include "multigrasp/seed_sampling.hpp"

namespace multigrasp {

struct VacuumRefinement {
  std::vector<VacuumGrasp> grasps;
  // Seeds skipped because their neighbourhood was degenerate.
  std::size_t dropped = 0;
};

// One grasp per seed: center = seed point, normal = covariance normal of the
// radius-r neighbourhood (oriented to the cloud viewpoint), score = fused
// score of the seed.
VacuumRefinement refine_vacuum_poses(const PointCloud& cloud, const KdTree& index, const SeedSet& seeds,
                                     double r = kDefaultNormalRadius);

// Descending score, ties by seed index; min(k, size) items.
std::vector<VacuumGrasp> rank_vacuum(std::vector<VacuumGrasp> grasps, std::size_t k);

}  // namespace multigrasp
