#include "multigrasp/ground_truth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

namespace multigrasp {

std::vector<GroundTruthGrasp> generate_ground_truth(const PointCloud& cloud, const SceneAnnotation& scene,
                                                    const GroundTruthConfig& cfg) {
  validate(scene, cloud);
  const CollisionChecker checker(scene, cfg.refiner.gripper);
  const ViewGrid grid = ViewGrid::fibonacci(cfg.parallel_views);
  const OracleParallelHead oracle(cloud, scene, checker, grid, cfg.refiner);
  const double min_cos = std::cos(deg2rad(cfg.refiner.max_approach_angle_deg));

  std::vector<std::size_t> object_points;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (scene.per_point_object_id[i] != 0) object_points.push_back(i);
  }

  const auto n = static_cast<std::ptrdiff_t>(object_points.size());
  std::vector<std::vector<GroundTruthGrasp>> per_point(object_points.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const std::size_t i = object_points[ku];
    const Point3& c = cloud.points[i];
    const Primitive* prim = scene.find(scene.per_point_object_id[i]);
    const SurfacePoint surf = closest_surface_point(*prim, c);
    auto& out = per_point[ku];

    out.push_back(GroundTruthGrasp{VacuumGrasp{c, UnitVector3(surf.normal), 0.0, static_cast<PointIndex>(i)},
                                   oracle_seal_quality(scene, VacuumGrasp{c, UnitVector3(surf.normal), 0.0},
                                                       cfg.cup_radius)});

    if (ku % static_cast<std::size_t>(std::max(1, cfg.parallel_stride)) != 0) continue;
    struct ViewBest {
      std::size_t view;
      OracleCandidate cand;
    };
    std::vector<ViewBest> bests;
    for (std::size_t v = 0; v < grid.size(); ++v) {
      if (grid.approach(v).dot(-surf.normal) < min_cos) continue;
      if (auto b = oracle.best_along_view(c, v)) bests.push_back({v, *b});
    }
    std::stable_sort(bests.begin(), bests.end(), [](const ViewBest& a, const ViewBest& b) {
      return a.cand.required_friction < b.cand.required_friction;
    });
    const std::size_t keep = std::min(bests.size(), static_cast<std::size_t>(std::max(0, cfg.parallel_per_point)));
    for (std::size_t j = 0; j < keep; ++j) {
      ParallelGrasp g;
      g.center = c;
      g.approach = grid.approach(bests[j].view);
      g.angle_deg = angle_of_bin(bests[j].cand.angle_bin, cfg.refiner.angle_bins);
      g.depth = cfg.refiner.depth_bins[static_cast<std::size_t>(bests[j].cand.depth_bin)];
      g.width = bests[j].cand.width;
      g.score = bests[j].cand.score;
      g.seed = static_cast<PointIndex>(i);
      out.push_back(GroundTruthGrasp{g, bests[j].cand.required_friction});
    }
  }

  std::vector<GroundTruthGrasp> grasps;
  for (auto& v : per_point) {
    for (auto& g : v) grasps.push_back(std::move(g));
  }
  // Parallel first, then vacuum; point order within each.
  std::stable_partition(grasps.begin(), grasps.end(),
                        [](const GroundTruthGrasp& g) { return g.gripper() == Gripper::parallel; });
  return grasps;
}

}  // namespace multigrasp
