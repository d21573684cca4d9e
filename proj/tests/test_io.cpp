#include <random>
#include <string>

#include "doctest.h"
#include "multigrasp/colormap.hpp"
#include "multigrasp/error.hpp"
#include "multigrasp/features.hpp"
#include "multigrasp/pipeline.hpp"
#include "multigrasp/serialization.hpp"
#include "scripted.hpp"

using namespace multigrasp;
using nlohmann::json;

namespace {

std::string schema_message(const std::function<void()>& f) {
  try {
    f();
  } catch (const SchemaError& e) {
    return e.what();
  }
  return "no error";
}

}  // namespace

TEST_CASE("scene annotation round trip") {
  const auto [cloud, scene] = generate_scene(5, 3, {});
  const auto back = scene_from_json(json::parse(to_json(scene).dump()));
  CHECK(back.per_point_object_id == scene.per_point_object_id);
  CHECK(back.table_height == scene.table_height);
  REQUIRE(back.primitives.size() == scene.primitives.size());
  for (std::size_t i = 0; i < back.primitives.size(); ++i) {
    CHECK(back.primitives[i].kind == scene.primitives[i].kind);
    CHECK(back.primitives[i].dimensions == scene.primitives[i].dimensions);
    CHECK(back.primitives[i].pose.translation == scene.primitives[i].pose.translation);
    CHECK(back.primitives[i].pose.rotation.coeffs() == scene.primitives[i].pose.rotation.coeffs());
    CHECK(back.primitives[i].friction_coeff == scene.primitives[i].friction_coeff);
  }
  CHECK(to_json(back).dump() == to_json(scene).dump());
}

TEST_CASE("schema errors name the offending field") {
  const auto [cloud, scene] = generate_scene(5, 2, {});
  json j = to_json(scene);
  json missing = j;
  missing.erase("table_height");
  CHECK(schema_message([&] { scene_from_json(missing); }).find("scene.table_height") != std::string::npos);
  json version = j;
  version["schema_version"] = 99;
  CHECK(schema_message([&] { scene_from_json(version); }).find("schema_version") != std::string::npos);
  json kind = j;
  kind["primitives"][1]["kind"] = "torus";
  CHECK(schema_message([&] { scene_from_json(kind); }).find("primitives[1].kind") != std::string::npos);
  json ids = j;
  ids["per_point_object_id"][3] = "x";
  CHECK(schema_message([&] { scene_from_json(ids); }).find("per_point_object_id[3]") != std::string::npos);
}

TEST_CASE("grasp lists round trip and report empty results") {
  ParallelGrasp p = scripted::top_down_grasp(Point3(0.01, 0.02, 0.03), 0.02, 0.05, 30.0);
  p.score = 0.7;
  p.seed = 12;
  const auto pj = grasp_list_json(std::vector<ParallelGrasp>{p});
  CHECK(pj["status"] == "ok");
  const auto back = parallel_grasps_from_json(json::parse(pj.dump()));
  REQUIRE(back.size() == 1);
  CHECK(back[0].center == p.center);
  CHECK(back[0].angle_deg == 30.0);
  CHECK(back[0].seed == 12);
  const auto empty = grasp_list_json(std::vector<VacuumGrasp>{});
  CHECK(empty["status"] == "no graspable region");
  CHECK(vacuum_grasps_from_json(empty).empty());
  CHECK_THROWS_AS(vacuum_grasps_from_json(pj), SchemaError);
  json bad = pj;
  bad["grasps"][0]["width"] = -1.0;
  CHECK(schema_message([&] { parallel_grasps_from_json(bad); }).find("width") != std::string::npos);
}

TEST_CASE("model checkpoint round trip") {
  auto model = MlpModel::initialized({}, 3);
  model.scaler.mean[2] = 0.5;
  model.scaler.scale[4] = 2.0;
  const auto back = model_from_json(json::parse(to_json(model).dump()));
  CHECK(back.params() == model.params());
  CHECK(back.scaler.mean == model.scaler.mean);
  CHECK(back.scaler.scale == model.scaler.scale);
  json bad = to_json(model);
  bad["kind"] = "something else";
  CHECK_THROWS_AS(model_from_json(bad), SchemaError);
}

TEST_CASE("viridis ramp") {
  CHECK(viridis(0.0) == ply::Rgb{68, 1, 84});
  CHECK(viridis(0.25) == ply::Rgb{59, 82, 139});
  CHECK(viridis(0.5) == ply::Rgb{33, 145, 140});
  CHECK(viridis(1.0) == ply::Rgb{253, 231, 37});
  CHECK(viridis(-3.0) == viridis(0.0));
  CHECK(viridis(7.0) == viridis(1.0));
  CHECK(viridis(0.125) == ply::Rgb{64, 42, 112});
  CHECK(colorize(std::vector<double>{0.0, 1.0}).size() == 2);
}

TEST_CASE("features are finite, standardizable and execution independent") {
  const auto [cloud, scene] = generate_scene(8, 3, {});
  KdTree tree(cloud);
  const auto a = compute_features(cloud, tree, scene.table_height, 0.01, Execution::serial);
  const auto b = compute_features(cloud, tree, scene.table_height, 0.01, Execution::parallel);
  REQUIRE(a.rows == cloud.size());
  CHECK(a.values == b.values);
  for (double v : a.values) CHECK(std::isfinite(v));
  for (std::size_t i = 0; i < a.rows; i += 101) {
    const auto r = a.row(i);
    CHECK(r[0] == doctest::Approx(cloud.points[i].z() - scene.table_height));
    CHECK(std::hypot(r[1], r[2], r[3]) == doctest::Approx(1.0));
  }
  const std::vector<const PointFeatures*> sets{&a};
  const auto scaler = FeatureScaler::fit(sets);
  auto scaled = a;
  scaler.apply(scaled);
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < scaled.rows; ++i) mean += scaled.row(i)[j];
    CHECK(std::abs(mean / scaled.rows) < 1e-9);
  }
}

TEST_CASE("fallback pipeline on a plane and a sphere") {
  using namespace scripted;
  auto scene = scene_with({box(1, Vec3(0.1, 0.1, 0.02), Vec3(-0.05, 0, 0.01), PrimitiveKind::plane_slab),
                           sphere(2, 0.025, Vec3(0.07, 0, 0.025))});
  const auto cloud = sample_scene(scene);
  PipelineConfig cfg;
  const auto out = run_pipeline(cloud, &scene, nullptr, scene.table_height, cfg);
  CHECK(!out.parallel.empty());
  CHECK(!out.vacuum.empty());
  CHECK(out.parallel.size() <= cfg.top_k);
  CHECK(out.vacuum.size() <= cfg.top_k);
  for (std::size_t i = 1; i < out.vacuum.size(); ++i) CHECK(out.vacuum[i - 1].score >= out.vacuum[i].score);
  CHECK(out.maps.role == MapRole::label);

  PipelineConfig vac_only = cfg;
  vac_only.grippers = {Gripper::vacuum};
  const auto v = run_pipeline(cloud, &scene, nullptr, scene.table_height, vac_only);
  CHECK(v.parallel.empty());
  CHECK(v.vacuum.size() == out.vacuum.size());
  CHECK_THROWS(run_pipeline(cloud, nullptr, nullptr, 0.0, cfg));
}

TEST_CASE("a porous scene yields no vacuum seeds") {
  using namespace scripted;
  auto scene = scene_with({box(1, Vec3(0.06, 0.06, 0.03), Vec3(0, 0, 0.015))});
  scene.primitives[0].porous = true;
  const auto cloud = sample_scene(scene);
  PipelineConfig cfg;
  cfg.grippers = {Gripper::vacuum};
  const auto out = run_pipeline(cloud, &scene, nullptr, 0.0, cfg);
  CHECK(out.vacuum_seeds.empty());
  CHECK(out.vacuum.empty());
}
