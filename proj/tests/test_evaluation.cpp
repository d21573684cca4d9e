#include <limits>
#include <random>
#include <sstream>

#include "doctest.h"
#include "metric_refs.hpp"
#include "multigrasp/error.hpp"
#include "multigrasp/evaluation.hpp"
#include "scripted.hpp"

using namespace multigrasp;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("precision at k") {
  const std::vector<double> c{0.1, 0.9, 0.3, kInf, 0.5};
  CHECK(precision_at_k(c, Gripper::parallel, 0.6, 5) == 0.6);
  CHECK(precision_at_k(std::vector<double>(7, 0.0), Gripper::parallel, 0.2, 7) == 1.0);
  CHECK(precision_at_k(std::vector<double>{0.0}, Gripper::parallel, 0.2, 50) == 1.0);
  CHECK(precision_at_k(std::vector<double>{}, Gripper::vacuum, 0.2, 10) == 0.0);
  CHECK(is_success(0.8, Gripper::parallel, 0.8));
  CHECK_FALSE(is_success(kInf, Gripper::parallel, 1.0));
  CHECK(is_success(0.4, Gripper::vacuum, 0.4));
  CHECK_FALSE(is_success(0.39, Gripper::vacuum, 0.4));
}

TEST_CASE("average precision") {
  CHECK(ap_mu(std::vector<double>(60, 0.0), Gripper::parallel, 0.2) == 1.0);
  CHECK(ap_mu(std::vector<double>{0.0}, Gripper::parallel, 0.2) == 1.0);

  // Successes at ranks 1 and 3 of five: P@1=1, P@2=1/2, P@3..5 = 2/3, 2/4,
  // 2/5, and 2/5 for every later k.
  const std::vector<double> c{0.1, kInf, 0.1, kInf, kInf};
  const double expected = (1.0 + 0.5 + 2.0 / 3 + 0.5 + 0.4 * 46) / 50;
  CHECK(ap_mu(c, Gripper::parallel, 0.2) == doctest::Approx(expected).epsilon(1e-14));

  CHECK(ap_overall(std::vector<double>(10, 0.0), Gripper::parallel) == ap_mu(std::vector<double>(10, 0.0), Gripper::parallel, 0.4));
  CHECK(ap_overall(std::vector<double>(10, 0.5), Gripper::vacuum) == 0.5);
}

TEST_CASE("metrics equal nested-loop references") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.2);
  EvalConfig cfg;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> c(rng() % 70);
    for (auto& x : c) x = rng() % 9 == 0 ? kInf : std::round(u(rng) * 10) / 10;
    for (auto g : {Gripper::parallel, Gripper::vacuum}) {
      for (double mu : {0.2, 0.4, 0.6, 0.8, 1.0}) {
        for (std::size_t k : {1, 3, 10, 50, 80}) REQUIRE(precision_at_k(c, g, mu, k) == metric_ref::precision(c, g, mu, k));
        REQUIRE(ap_mu(c, g, mu) == metric_ref::ap(c, g, mu, 50));
      }
      const auto& grid = g == Gripper::parallel ? cfg.mu_p_grid : cfg.mu_v_grid;
      REQUIRE(ap_overall(c, g) == metric_ref::ap_all(c, g, grid, 50));
    }
  }
}

TEST_CASE("precision never drops when a success is prepended") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> c(1 + rng() % 30);
    for (auto& x : c) x = (rng() % 3) * 0.5;
    auto better = c;
    better.insert(better.begin(), 0.0);
    for (std::size_t k = 1; k <= 40; ++k)
      CHECK(precision_at_k(better, Gripper::parallel, 0.4, k) >= precision_at_k(c, Gripper::parallel, 0.4, k));
  }
}

TEST_CASE("coefficients of grasps on a scripted scene") {
  using namespace scripted;
  auto scene = scene_with({sphere(1, 0.03, Vec3(0, 0, 0.03)), box(2, Vec3(0.1, 0.1, 0.04), Vec3(0.12, 0, 0.02))});
  const CollisionChecker checker(scene);
  CHECK(grasp_coefficient(scene, checker, top_down_grasp(Point3(0, 0, 0.06), 0.03, 0.08, 0.0)) ==
        doctest::Approx(0.0).scale(1.0));
  // Too narrow for the sphere: fingers land inside it.
  CHECK(std::isinf(grasp_coefficient(scene, checker, top_down_grasp(Point3(0, 0, 0.06), 0.03, 0.03, 0.0))));
  CHECK(std::isinf(grasp_coefficient(scene, checker, top_down_grasp(Point3(0, 0.2, 0.2), 0.0, 0.05, 0.0))));
  VacuumGrasp flat;
  flat.center = Point3(0.12, 0, 0.04);
  flat.normal = UnitVector3(0, 0, 1);
  CHECK(grasp_coefficient(scene, checker, flat) == 1.0);
  VacuumGrasp buried = flat;
  buried.normal = UnitVector3(0, 0, -1);
  CHECK(grasp_coefficient(scene, checker, buried) == 0.0);
}

TEST_CASE("scripted clearing traces") {
  for (const auto& s : metric_ref::scripted_traces()) {
    CAPTURE(s.name);
    const auto m = clearing_metrics(s.trace);
    CHECK(m.r_object == s.r_object);
    CHECK(m.r_grasp == s.r_grasp);
    CHECK(m.r_mix == s.r_mix);
    CHECK(m.r_seen == s.r_seen);
    CHECK(m.grasps_successful <= m.grasps_total);
    CHECK(m.objects_cleared <= m.objects_detected);
    CHECK(m.objects_detected <= m.objects_total);
  }
  std::vector<ClearingMetrics> runs;
  for (const auto& s : metric_ref::scripted_traces()) runs.push_back(clearing_metrics(s.trace));
  const auto total = aggregate(runs);
  CHECK(total.objects_total == 24);
  CHECK(total.objects_cleared == 16);
  CHECK(total.r_object == 16.0 / 24.0);
}

TEST_CASE("best gripper per object") {
  using metric_ref::hit;
  using metric_ref::miss;
  const ClearingTrace a{{1, 2}, {hit(1), miss(2), miss(2), miss(2)}, {1, 2}};
  const ClearingTrace b{{1, 2}, {miss(1), hit(1), miss(2), hit(2)}, {1, 2}};
  const std::vector<ClearingTrace> both{a, b};
  const auto m = combine_grippers_posthoc(both);
  CHECK(m.objects_cleared == 2);
  CHECK(m.grasps_total == 3);
  CHECK(m.grasps_on_cleared == 3);
  CHECK(m.r_mix == 1.5);

  const ClearingTrace c{{1, 2, 3}, {miss(0), hit(3)}, {3}};
  const ClearingTrace d{{1, 2, 3}, {miss(1), miss(1), miss(1)}, {1}};
  const std::vector<ClearingTrace> cd{c, d};
  const auto n = combine_grippers_posthoc(cd);
  CHECK(n.objects_cleared == 1);
  CHECK(n.grasps_total == 1);
  CHECK(n.objects_detected == 2);

  const ClearingTrace other{{4}, {}, {}};
  const std::vector<ClearingTrace> mismatch{a, other};
  CHECK_THROWS_AS(combine_grippers_posthoc(mismatch), Error);
}

TEST_CASE("combined metrics equal an exhaustive per-object minimum") {
  std::mt19937_64 rng(8);
  for (int scene = 0; scene < 5; ++scene) {
    const std::vector<int> objects{1, 2, 3, 4, 5};
    std::vector<ClearingTrace> traces(2);
    for (auto& t : traces) {
      t.objects = objects;
      for (int k = 0; k < 12; ++k) t.attempts.push_back({static_cast<int>(rng() % 6), rng() % 3 == 0, Gripper::vacuum});
    }
    std::size_t cleared = 0, total = 0;
    for (int id : objects) {
      std::size_t best = 1000, fewest = 1000;
      for (const auto& t : traces) {
        std::size_t tries = 0;
        bool ok = false;
        for (const auto& a : t.attempts)
          if (a.object_id == id) ++tries, ok = ok || a.success;
        fewest = std::min(fewest, tries);
        if (ok) best = std::min(best, tries);
      }
      cleared += best < 1000;
      total += best < 1000 ? best : fewest;
    }
    const auto m = combine_grippers_posthoc(traces);
    CHECK(m.objects_cleared == cleared);
    CHECK(m.grasps_total == total);
  }
}

TEST_CASE("clearing loop removes grasped objects") {
  using namespace scripted;
  auto scene = scene_with({box(1, Vec3(0.06, 0.06, 0.03), Vec3(-0.06, 0, 0.015)), box(2, Vec3(0.06, 0.06, 0.03), Vec3(0.06, 0, 0.015))});
  const auto cloud = sample_scene(scene);
  const GraspPlanner planner = [](const PointCloud& c, const SceneAnnotation& s) {
    PlanResult r;
    for (const auto& p : s.primitives) {
      VacuumGrasp v;
      v.center = p.pose.translation + Vec3(0, 0, 0.015);
      v.normal = UnitVector3(0, 0, 1);
      r.ranked.push_back(v);
    }
    for (PointIndex i = 0; i < c.size(); ++i)
      if (s.per_point_object_id[i] != 0) r.seeds.push_back(i);
    return r;
  };
  const auto trace = run_clearing_loop(cloud, scene, planner);
  REQUIRE(trace.attempts.size() == 2);
  CHECK(trace.attempts[0].object_id == 1);
  CHECK(trace.attempts[1].object_id == 2);
  CHECK(trace.attempts[0].success);
  CHECK(trace.detected == std::vector<int>{1, 2});
  const auto m = clearing_metrics(trace);
  CHECK(m.r_object == 1.0);
  CHECK(m.r_mix == 1.0);

  const GraspPlanner hopeless = [](const PointCloud&, const SceneAnnotation&) {
    PlanResult r;
    VacuumGrasp v;
    v.center = Point3(0, 0.15, 0.0);
    r.ranked.push_back(v);
    return r;
  };
  const auto stuck = run_clearing_loop(cloud, scene, hopeless);
  CHECK(stuck.attempts.size() == 3);
  CHECK(clearing_metrics(stuck).r_object == 0.0);
}

TEST_CASE("report writers") {
  std::ostringstream ap;
  const std::vector<ApRow> rows{{"scene_000", Gripper::vacuum, 0.2, 0.75}};
  write_ap_csv(ap, rows);
  CHECK(ap.str() == "scene,gripper,mu,ap\nscene_000,vacuum,0.2,0.75\n");
}
