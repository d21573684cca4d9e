#include "multigrasp/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <set>

#include "multigrasp/error.hpp"

namespace multigrasp {

void validate(const EvalConfig& cfg) {
  if (cfg.k_max < 1) throw Error("eval: k_max must be at least 1");
  for (const auto* grid : {&cfg.mu_p_grid, &cfg.mu_v_grid}) {
    if (grid->empty()) throw Error("eval: coefficient grids must not be empty");
    if (!std::is_sorted(grid->begin(), grid->end())) throw Error("eval: coefficient grids must be ascending");
  }
  if (cfg.max_consecutive_failures < 1) throw Error("eval: max_consecutive_failures must be at least 1");
}

double grasp_coefficient(const SceneAnnotation& scene, const CollisionChecker& checker, const ParallelGrasp& g) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (g.width > checker.gripper().max_width) return inf;
  ParallelContact contact;
  try {
    contact = parallel_contact(scene, g);
  } catch (const NoContact&) {
    return inf;
  }
  if (!std::isfinite(contact.required_friction)) return inf;
  if (checker.parallel_collides(g, contact.t_enter, contact.t_exit)) return inf;
  return contact.required_friction;
}

double grasp_coefficient(const SceneAnnotation& scene, const CollisionChecker& checker, const VacuumGrasp& g) {
  if (checker.vacuum_collides(g)) return 0.0;
  return oracle_seal_quality(scene, g, checker.gripper().cup_radius);
}

bool is_success(double coefficient, Gripper gripper, double mu) {
  return gripper == Gripper::parallel ? coefficient <= mu : coefficient >= mu;
}

double precision_at_k(std::span<const double> coefficients, Gripper gripper, double mu, std::size_t k) {
  const std::size_t n = std::min(k, coefficients.size());
  if (n == 0) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) hits += is_success(coefficients[i], gripper, mu) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(n);
}

double ap_mu(std::span<const double> coefficients, Gripper gripper, double mu, int k_max) {
  if (k_max < 1) throw Error("ap_mu: k_max must be at least 1");
  double sum = 0.0;
  for (int k = 1; k <= k_max; ++k) sum += precision_at_k(coefficients, gripper, mu, static_cast<std::size_t>(k));
  return sum / k_max;
}

double ap_overall(std::span<const double> coefficients, Gripper gripper, const EvalConfig& cfg) {
  const auto& grid = gripper == Gripper::parallel ? cfg.mu_p_grid : cfg.mu_v_grid;
  double sum = 0.0;
  for (double mu : grid) sum += ap_mu(coefficients, gripper, mu, cfg.k_max);
  return sum / static_cast<double>(grid.size());
}

std::vector<double> coefficients(const SceneAnnotation& scene, const CollisionChecker& checker,
                                 std::span<const ParallelGrasp> ranked) {
  std::vector<double> out;
  out.reserve(ranked.size());
  for (const auto& g : ranked) out.push_back(grasp_coefficient(scene, checker, g));
  return out;
}

std::vector<double> coefficients(const SceneAnnotation& scene, const CollisionChecker& checker,
                                 std::span<const VacuumGrasp> ranked) {
  std::vector<double> out;
  out.reserve(ranked.size());
  for (const auto& g : ranked) out.push_back(grasp_coefficient(scene, checker, g));
  return out;
}

ClearingMetrics finalize(ClearingMetrics m) {
  auto ratio = [](std::size_t a, std::size_t b) { return b == 0 ? 0.0 : static_cast<double>(a) / b; };
  m.r_object = ratio(m.objects_cleared, m.objects_total);
  m.r_grasp = ratio(m.grasps_successful, m.grasps_total);
  m.r_mix = ratio(m.grasps_on_cleared, m.objects_cleared);
  m.r_seen = ratio(m.objects_detected, m.objects_total);
  return m;
}

ClearingMetrics clearing_metrics(const ClearingTrace& trace) {
  const std::set<int> objects(trace.objects.begin(), trace.objects.end());
  std::set<int> cleared;
  ClearingMetrics m;
  m.objects_total = objects.size();
  m.grasps_total = trace.attempts.size();
  for (const auto& a : trace.attempts) {
    if (!a.success) continue;
    ++m.grasps_successful;
    if (objects.count(a.object_id)) cleared.insert(a.object_id);
  }
  m.objects_cleared = cleared.size();
  for (const auto& a : trace.attempts) m.grasps_on_cleared += cleared.count(a.object_id);
  for (int id : std::set<int>(trace.detected.begin(), trace.detected.end())) m.objects_detected += objects.count(id);
  return finalize(m);
}

ClearingMetrics aggregate(std::span<const ClearingMetrics> runs) {
  ClearingMetrics m;
  for (const auto& r : runs) {
    m.objects_total += r.objects_total;
    m.objects_cleared += r.objects_cleared;
    m.objects_detected += r.objects_detected;
    m.grasps_total += r.grasps_total;
    m.grasps_successful += r.grasps_successful;
    m.grasps_on_cleared += r.grasps_on_cleared;
  }
  return finalize(m);
}

namespace {

void remove_object(PointCloud& cloud, SceneAnnotation& scene, int object_id) {
  std::vector<Point3> pts;
  std::vector<int> ids;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (scene.per_point_object_id[i] == object_id) continue;
    pts.push_back(cloud.points[i]);
    ids.push_back(scene.per_point_object_id[i]);
  }
  cloud.points = std::move(pts);
  scene.per_point_object_id = std::move(ids);
  std::erase_if(scene.primitives, [&](const Primitive& p) { return p.object_id == object_id; });
}

}  // namespace

ClearingTrace run_clearing_loop(const PointCloud& cloud, const SceneAnnotation& scene, const GraspPlanner& planner,
                                const EvalConfig& cfg) {
  validate(cfg);
  validate(scene, cloud);
  PointCloud state = cloud;
  SceneAnnotation world = scene;
  ClearingTrace trace;
  for (const auto& p : scene.primitives) trace.objects.push_back(p.object_id);
  std::sort(trace.objects.begin(), trace.objects.end());
  std::set<int> detected;

  int failures = 0;
  while (!world.primitives.empty() && !state.empty() && failures < cfg.max_consecutive_failures) {
    const PlanResult plan = planner(state, world);
    for (PointIndex s : plan.seeds) {
      if (s < state.size() && world.per_point_object_id[s] != 0) detected.insert(world.per_point_object_id[s]);
    }
    if (plan.ranked.empty()) break;

    const CollisionChecker checker(world, cfg.gripper);
    Attempt attempt;
    if (const auto* pg = std::get_if<ParallelGrasp>(&plan.ranked.front())) {
      attempt.gripper = Gripper::parallel;
      attempt.object_id = surface_object_at(world, pg->center);
      try {
        attempt.object_id = parallel_contact(world, *pg).object_id;
      } catch (const NoContact&) {
      }
      attempt.success = attempt.object_id != 0 &&
                        is_success(grasp_coefficient(world, checker, *pg), Gripper::parallel, cfg.exec_mu_p);
    } else {
      const auto& vg = std::get<VacuumGrasp>(plan.ranked.front());
      attempt.gripper = Gripper::vacuum;
      attempt.object_id = surface_object_at(world, vg.center);
      attempt.success = attempt.object_id != 0 &&
                        is_success(grasp_coefficient(world, checker, vg), Gripper::vacuum, cfg.exec_mu_v);
    }
    trace.attempts.push_back(attempt);
    if (attempt.success) {
      failures = 0;
      remove_object(state, world, attempt.object_id);
    } else {
      ++failures;
    }
  }
  trace.detected.assign(detected.begin(), detected.end());
  return trace;
}

ClearingMetrics combine_grippers_posthoc(std::span<const ClearingTrace> per_gripper) {
  if (per_gripper.empty()) throw Error("combine_grippers_posthoc: no traces");
  const std::set<int> objects(per_gripper.front().objects.begin(), per_gripper.front().objects.end());
  std::set<int> detected;
  for (const auto& t : per_gripper) {
    if (std::set<int>(t.objects.begin(), t.objects.end()) != objects) {
      throw Error("combine_grippers_posthoc: traces cover different object sets");
    }
    detected.insert(t.detected.begin(), t.detected.end());
  }

  ClearingMetrics m;
  m.objects_total = objects.size();
  for (int id : objects) {
    std::size_t best_cleared = std::numeric_limits<std::size_t>::max();
    std::size_t fewest = std::numeric_limits<std::size_t>::max();
    for (const auto& t : per_gripper) {
      std::size_t tries = 0;
      bool cleared = false;
      for (const auto& a : t.attempts) {
        if (a.object_id != id) continue;
        ++tries;
        cleared = cleared || a.success;
      }
      fewest = std::min(fewest, tries);
      if (cleared) best_cleared = std::min(best_cleared, tries);
    }
    if (best_cleared != std::numeric_limits<std::size_t>::max()) {
      ++m.objects_cleared;
      ++m.grasps_successful;
      m.grasps_total += best_cleared;
      m.grasps_on_cleared += best_cleared;
    } else {
      m.grasps_total += fewest;
    }
    m.objects_detected += detected.count(id);
  }
  return finalize(m);
}

void write_ap_csv(std::ostream& os, std::span<const ApRow> rows) {
  os << "scene,gripper,mu,ap\n";
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, ",%.1f,%.10g\n", r.mu, r.ap);
    os << r.scene << ',' << to_string(r.gripper) << buf;
  }
}

void write_clearing_csv(std::ostream& os, std::span<const ClearingRow> rows) {
  os << "scene,policy,objects_total,objects_cleared,objects_detected,grasps_total,grasps_successful,"
        "grasps_on_cleared,r_object,r_grasp,r_mix,r_seen\n";
  char buf[256];
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    std::snprintf(buf, sizeof buf, ",%zu,%zu,%zu,%zu,%zu,%zu,%.10g,%.10g,%.10g,%.10g\n", m.objects_total,
                  m.objects_cleared, m.objects_detected, m.grasps_total, m.grasps_successful, m.grasps_on_cleared,
                  m.r_object, m.r_grasp, m.r_mix, m.r_seen);
    os << r.scene << ',' << r.policy << buf;
  }
}

}  // namespace multigrasp
