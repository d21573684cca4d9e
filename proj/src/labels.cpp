#include "multigrasp/labels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "multigrasp/collision.hpp"
#include "multigrasp/error.hpp"

namespace multigrasp {

namespace {

using Key = std::array<double, 3>;

// Unique grasp points of one gripper with their best quality, in
// lexicographic coordinate order so the result does not depend on the order
// grasps (or cloud points) arrive in.
struct GraspPoints {
  std::vector<Point3> points;
  std::vector<double> quality;
};

GraspPoints unique_points(const std::map<Key, double>& best) {
  GraspPoints out;
  for (const auto& [k, q] : best) {
    out.points.emplace_back(k[0], k[1], k[2]);
    out.quality.push_back(q);
  }
  return out;
}

void associate(const PointCloud& cloud, const std::vector<char>& eligible, const GraspPoints& gp, double radius,
               std::vector<double>& value, std::vector<char>& hit) {
  value.assign(cloud.size(), 0.0);
  hit.assign(cloud.size(), 0);
  if (gp.points.empty()) return;
  const KdTree tree(gp.points);
  const double r2 = radius * radius;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (!eligible[i]) continue;
    const PointIndex j = tree.nearest(cloud.points[i]);
    if (squared_distance(cloud.points[i], gp.points[j]) > r2) continue;
    value[i] = gp.quality[j];
    hit[i] = 1;
  }
}

}  // namespace

GraspnessMaps build_label_maps(const PointCloud& cloud, const SceneAnnotation& scene,
                               const std::vector<GroundTruthGrasp>& grasps, const LabelConfig& cfg) {
  validate(scene, cloud);
  if (grasps.empty()) throw Error("build_label_maps: no ground-truth grasps");

  std::map<Key, double> par_best;  // required friction, lower is better
  std::map<Key, double> vac_best;  // seal, higher is better
  const CollisionChecker checker(scene, cfg.gripper);
  for (const auto& g : grasps) {
    const Point3& c = g.center();
    const Key key{c.x(), c.y(), c.z()};
    if (g.gripper() == Gripper::parallel) {
      const auto& pose = std::get<ParallelGrasp>(g.pose);
      if (!std::isfinite(g.quality_coeff)) continue;
      if (cfg.check_collisions && checker.parallel_collides(pose)) continue;
      auto [it, fresh] = par_best.emplace(key, g.quality_coeff);
      if (!fresh) it->second = std::min(it->second, g.quality_coeff);
    } else {
      const auto& pose = std::get<VacuumGrasp>(g.pose);
      if (cfg.check_collisions && checker.vacuum_collides(pose)) continue;
      if (!(g.quality_coeff >= cfg.seal_threshold)) continue;
      auto [it, fresh] = vac_best.emplace(key, g.quality_coeff);
      if (!fresh) it->second = std::max(it->second, g.quality_coeff);
    }
  }

  GraspnessMaps maps;
  maps.role = MapRole::label;
  maps.objectness.assign(cloud.size(), 0.0);
  std::vector<char> eligible(cloud.size(), 0);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const bool object = scene.per_point_object_id[i] != 0;
    maps.objectness[i] = object ? 1.0 : 0.0;
    eligible[i] = object && cloud.points[i].z() >= scene.table_height;
  }

  std::vector<char> hit;
  const GraspPoints vac = unique_points(vac_best);
  associate(cloud, eligible, vac, cfg.association_radius, maps.vacuum, hit);
  if (!vac.quality.empty()) {
    const auto [lo, hi] = std::minmax_element(vac.quality.begin(), vac.quality.end());
    const double vmin = *lo, span = *hi - *lo;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      if (!hit[i]) continue;
      const double r = span > 0.0 ? (maps.vacuum[i] - vmin) / span : 1.0;
      maps.vacuum[i] = r < cfg.vacuum_cutoff ? 0.0 : r;
    }
  }

  const GraspPoints par = unique_points(par_best);
  associate(cloud, eligible, par, cfg.association_radius, maps.parallel, hit);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (hit[i]) maps.parallel[i] = std::clamp(1.0 - maps.parallel[i] / cfg.mu_max, 0.0, 1.0);
  }
  return maps;
}

GraspnessMaps project_map_to_cloud(const GraspnessMaps& maps, const PointCloud& source, const PointCloud& target) {
  if (source.empty() || target.empty()) throw Error("project_map_to_cloud: empty cloud");
  if (maps.size() != source.size() || maps.parallel.size() != source.size() || maps.vacuum.size() != source.size()) {
    throw Error("project_map_to_cloud: map length does not match the source cloud");
  }
  const KdTree tree(source);
  GraspnessMaps out;
  out.role = maps.role;
  out.objectness.resize(target.size());
  out.parallel.resize(target.size());
  out.vacuum.resize(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) {
    const PointIndex j = tree.nearest(target.points[i]);
    out.objectness[i] = maps.objectness[j];
    out.parallel[i] = maps.parallel[j];
    out.vacuum[i] = maps.vacuum[j];
  }
  return out;
}

}  // namespace multigrasp
