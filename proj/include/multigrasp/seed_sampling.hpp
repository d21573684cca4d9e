#pragma once

#include <span>
#include <vector>

#include "multigrasp/grasp.hpp"
#include "multigrasp/point_cloud.hpp"
#include "multigrasp/spatial_index.hpp"

namespace multigrasp {

struct SamplingConfig {
  double t_parallel = 0.1;
  double t_vacuum = 0.1;
  std::size_t m_parallel = 1024;
  std::size_t m_vacuum = 1024;
};

void validate(const SamplingConfig& cfg);

// Seeds chosen for one gripper; fused_scores[i] belongs to indices[i].
struct SeedSet {
  Gripper gripper = Gripper::parallel;
  std::vector<PointIndex> indices;
  std::vector<double> fused_scores;

  std::size_t size() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
};

// Elementwise objectness x graspness. Throws on length mismatch.
std::vector<double> fuse_scores(std::span<const double> objectness, std::span<const double> graspness);

// Candidates are points with fused > threshold (strict). Up to m of them are
// returned as-is in ascending index order; more are reduced to m by
// farthest point sampling (returned in pick order). An empty set is a valid
// outcome.
SeedSet select_seeds(const PointCloud& cloud, std::span<const double> fused, double threshold, std::size_t m,
                     Gripper gripper);

}  // namespace multigrasp
