#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "multigrasp/error.hpp"
#include "multigrasp/ground_truth.hpp"
#include "multigrasp/labels.hpp"
#include "oracles.hpp"
#include "scripted.hpp"

using namespace multigrasp;
using namespace scripted;

namespace {

GroundTruthGrasp vacuum_at(const Point3& p, double seal) {
  VacuumGrasp v;
  v.center = p;
  v.normal = UnitVector3(0, 0, 1);
  return {v, seal};
}

std::size_t nearest_point(const PointCloud& c, const Point3& p) {
  return oracle::knn(c.points, p, 1).front();
}

}  // namespace

TEST_CASE("interior top-face vacuum grasps label only top-face points") {
  auto scene = scene_with({box(1, Vec3(0.08, 0.08, 0.04), Vec3(0, 0, 0.02))});
  const auto cloud = sample_scene(scene);
  std::vector<GroundTruthGrasp> grasps;
  std::vector<char> top(cloud.size(), 0);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto& p = cloud.points[i];
    if (scene.per_point_object_id[i] != 1 || std::abs(p.z() - 0.04) > 1e-9) continue;
    top[i] = 1;
    if (std::max(std::abs(p.x()), std::abs(p.y())) < 0.04 - 0.011) {
      VacuumGrasp v;
      v.center = p;
      v.normal = UnitVector3(0, 0, 1);
      grasps.push_back({v, oracle_seal_quality(scene, v)});
    }
  }
  REQUIRE(!grasps.empty());
  const auto maps = build_label_maps(cloud, scene, grasps);
  std::size_t positive = 0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    CHECK(maps.parallel[i] == 0.0);
    if (maps.vacuum[i] > 0.0) {
      ++positive;
      CHECK(top[i]);
    }
  }
  CHECK(positive > 0);
}

TEST_CASE("a lone grasp below the seal threshold leaves the vacuum channel empty") {
  auto scene = scene_with({box(1, Vec3(0.08, 0.08, 0.04), Vec3(0, 0, 0.02))});
  const auto cloud = sample_scene(scene);
  const auto maps = build_label_maps(cloud, scene, {vacuum_at(Point3(0, 0, 0.04), 0.003)});
  CHECK(std::all_of(maps.vacuum.begin(), maps.vacuum.end(), [](double v) { return v == 0.0; }));
  const auto kept = build_label_maps(cloud, scene, {vacuum_at(Point3(0, 0, 0.04), 0.004)});
  CHECK(kept.vacuum[nearest_point(cloud, Point3(0, 0, 0.04))] == 1.0);
}

TEST_CASE("vacuum qualities are min-max rescaled per scene") {
  auto scene = scene_with({box(1, Vec3(0.12, 0.12, 0.04), Vec3(0, 0, 0.02))});
  const auto cloud = sample_scene(scene);
  const std::vector<Point3> at = {Point3(-0.04, 0, 0.04), Point3(0, 0, 0.04), Point3(0.04, 0, 0.04)};
  const auto maps = build_label_maps(cloud, scene,
                                     {vacuum_at(at[0], 0.2), vacuum_at(at[1], 0.6), vacuum_at(at[2], 1.0)});
  CHECK(maps.vacuum[nearest_point(cloud, at[0])] == 0.0);
  CHECK(maps.vacuum[nearest_point(cloud, at[1])] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(maps.vacuum[nearest_point(cloud, at[2])] == 1.0);
  CHECK_THROWS_AS(build_label_maps(cloud, scene, {}), Error);
}

TEST_CASE("parallel graspness is one minus the normalized friction") {
  auto scene = scene_with({box(1, Vec3(0.12, 0.12, 0.04), Vec3(0, 0, 0.02))});
  const auto cloud = sample_scene(scene);
  LabelConfig cfg;
  cfg.check_collisions = false;
  std::vector<GroundTruthGrasp> grasps;
  const Point3 a(0.0, 0.0, 0.04), b(0.04, 0.04, 0.04);
  grasps.push_back({top_down_grasp(a, 0.02, 0.08, 0.0), 0.25});
  grasps.push_back({top_down_grasp(a, 0.02, 0.08, 90.0), 0.5});
  grasps.push_back({top_down_grasp(b, 0.02, 0.08, 0.0), 3.0});
  const auto maps = build_label_maps(cloud, scene, grasps, cfg);
  CHECK(maps.parallel[nearest_point(cloud, a)] == 0.75);
  CHECK(maps.parallel[nearest_point(cloud, b)] == 0.0);
}

TEST_CASE("label maps on a synthetic scene") {
  auto scene = scene_with({box(1, Vec3(0.05, 0.04, 0.04), Vec3(-0.05, 0, 0.02)), sphere(2, 0.025, Vec3(0.05, 0, 0.025)),
                           cylinder(3, 0.02, 0.06, Vec3(0, 0.07, 0.03))});
  auto cloud = sample_scene(scene);
  // Object points that ended up under the table (as a depth sensor would
  // see through a glass table) must stay unlabeled.
  for (int i = 0; i < 20; ++i) {
    cloud.points.emplace_back(-0.05 + 0.001 * i, 0.0, -0.002);
    scene.per_point_object_id.push_back(1);
  }
  const auto grasps = generate_ground_truth(cloud, scene);
  const auto maps = build_label_maps(cloud, scene, grasps);
  std::size_t vac_pos = 0, par_pos = 0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double v = maps.vacuum[i];
    CHECK((v == 0.0 || (v >= 0.1 && v <= 1.0)));
    CHECK(maps.parallel[i] >= 0.0);
    CHECK(maps.parallel[i] <= 1.0);
    const bool background = scene.per_point_object_id[i] == 0;
    const bool below = cloud.points[i].z() < scene.table_height;
    CHECK(maps.objectness[i] == (background ? 0.0 : 1.0));
    if (background || below) {
      CHECK(v == 0.0);
      CHECK(maps.parallel[i] == 0.0);
    }
    vac_pos += v > 0.0;
    par_pos += maps.parallel[i] > 0.0;
  }
  CHECK(vac_pos > 50);
  CHECK(par_pos > 50);

  SUBCASE("point and grasp order do not matter") {
    std::vector<std::size_t> perm(cloud.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(4);
    std::shuffle(perm.begin(), perm.end(), rng);
    PointCloud shuffled;
    shuffled.viewpoint = cloud.viewpoint;
    auto shuffled_scene = scene;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      shuffled.points.push_back(cloud.points[perm[i]]);
      shuffled_scene.per_point_object_id[i] = scene.per_point_object_id[perm[i]];
    }
    auto reordered = grasps;
    std::shuffle(reordered.begin(), reordered.end(), rng);
    const auto again = build_label_maps(shuffled, shuffled_scene, reordered);
    for (std::size_t i = 0; i < perm.size(); ++i) {
      REQUIRE(again.vacuum[i] == maps.vacuum[perm[i]]);
      REQUIRE(again.parallel[i] == maps.parallel[perm[i]]);
      REQUIRE(again.objectness[i] == maps.objectness[perm[i]]);
    }
  }
}

TEST_CASE("projection onto another cloud uses the nearest source point") {
  PointCloud grid;
  GraspnessMaps maps;
  for (int x = 0; x < 20; ++x)
    for (int y = 0; y < 20; ++y) {
      grid.points.emplace_back(0.002 * x, 0.002 * y, 0.0);
      maps.objectness.push_back(x % 2);
      maps.parallel.push_back(0.01 * (x + y));
      maps.vacuum.push_back(0.001 * x * y);
    }
  const auto same = project_map_to_cloud(maps, grid, grid);
  CHECK(same.parallel == maps.parallel);
  CHECK(same.vacuum == maps.vacuum);
  CHECK(same.objectness == maps.objectness);

  PointCloud subset;
  for (std::size_t i = 0; i < grid.size(); i += 7) subset.points.push_back(grid.points[i]);
  const auto sub = project_map_to_cloud(maps, grid, subset);
  for (std::size_t j = 0; j < subset.size(); ++j) CHECK(sub.vacuum[j] == maps.vacuum[7 * j]);

  std::mt19937_64 rng(6);
  std::normal_distribution<double> jitter(0.0, 0.001);
  PointCloud moved;
  for (const auto& p : grid.points) moved.points.push_back(p + Vec3(jitter(rng), jitter(rng), jitter(rng)));
  const auto proj = project_map_to_cloud(maps, grid, moved);
  for (std::size_t j = 0; j < moved.size(); ++j) {
    const auto nn = oracle::knn(grid.points, moved.points[j], 1).front();
    CHECK(proj.parallel[j] == maps.parallel[nn]);
  }
  CHECK_THROWS_AS(project_map_to_cloud(maps, grid, PointCloud{}), Error);
  CHECK_THROWS_AS(project_map_to_cloud(maps, subset, grid), Error);
}
