#pragma once

#include <vector>

#include "multigrasp/refine_parallel.hpp"
#include "multigrasp/scene.hpp"

namespace multigrasp {

struct GroundTruthConfig {
  // Coarser view lattice than the refiner's for annotation speed.
  int parallel_views = 60;
  // Every n-th object point (in cloud order) gets parallel annotations.
  int parallel_stride = 2;
  // Best views kept per annotated point.
  int parallel_per_point = 3;
  double cup_radius = 0.01;
  ParallelRefinerConfig refiner;
};

// Oracle grasps for a synthetic scene. Parallel: for sampled object points,
// the best collision-free (angle, depth) candidate of each of the top
// `parallel_per_point` views, quality = required friction (finite only).
// Vacuum: one grasp per object point with the analytic surface normal,
// quality = seal coefficient (zeros included).
std::vector<GroundTruthGrasp> generate_ground_truth(const PointCloud& cloud, const SceneAnnotation& scene,
                                                    const GroundTruthConfig& cfg = {});

}  // namespace multigrasp
