#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "multigrasp/collision.hpp"
#include "multigrasp/grasp.hpp"
#include "multigrasp/scene.hpp"

namespace multigrasp {

struct EvalConfig {
  int k_max = 50;
  std::vector<double> mu_p_grid = {0.2, 0.4, 0.6, 0.8, 1.0};
  std::vector<double> mu_v_grid = {0.2, 0.4, 0.6, 0.8};
  int max_consecutive_failures = 3;
  // Success thresholds when a grasp is executed in the clearing loop.
  double exec_mu_p = 0.8;
  double exec_mu_v = 0.4;
  GripperGeometry gripper;
};

void validate(const EvalConfig& cfg);

// Oracle coefficient of a grasp: required friction for parallel grasps (+inf
// when colliding or without closure), seal for vacuum grasps (0 when
// colliding).
double grasp_coefficient(const SceneAnnotation& scene, const CollisionChecker& checker, const ParallelGrasp& g);
double grasp_coefficient(const SceneAnnotation& scene, const CollisionChecker& checker, const VacuumGrasp& g);

// Parallel: coefficient <= mu. Vacuum: coefficient >= mu.
bool is_success(double coefficient, Gripper gripper, double mu);

// Coefficients are listed in rank order (best score first). k is clamped to
// the list length; an empty list scores 0.
double precision_at_k(std::span<const double> coefficients, Gripper gripper, double mu, std::size_t k);
// Mean of precision_at_k for k = 1..k_max.
double ap_mu(std::span<const double> coefficients, Gripper gripper, double mu, int k_max = 50);
// Mean of ap_mu over the gripper's coefficient grid.
double ap_overall(std::span<const double> coefficients, Gripper gripper, const EvalConfig& cfg = {});

// Oracle coefficients of ranked grasp lists.
std::vector<double> coefficients(const SceneAnnotation& scene, const CollisionChecker& checker,
                                 std::span<const ParallelGrasp> ranked);
std::vector<double> coefficients(const SceneAnnotation& scene, const CollisionChecker& checker,
                                 std::span<const VacuumGrasp> ranked);

// ---- clearing loop ----

struct Attempt {
  int object_id = 0;  // object under the grasp center, 0 when none
  bool success = false;
  Gripper gripper = Gripper::parallel;
};

struct ClearingTrace {
  std::vector<int> objects;   // ids present at the start
  std::vector<Attempt> attempts;
  std::vector<int> detected;  // ascending ids that ever held a seed point
};

struct ClearingMetrics {
  std::size_t objects_total = 0, objects_cleared = 0, objects_detected = 0;
  std::size_t grasps_total = 0, grasps_successful = 0, grasps_on_cleared = 0;
  double r_object = 0.0, r_grasp = 0.0, r_mix = 0.0, r_seen = 0.0;
};

// Ratios from counters; r_grasp and r_mix are 0 when their denominator is.
ClearingMetrics finalize(ClearingMetrics m);
ClearingMetrics clearing_metrics(const ClearingTrace& trace);
// Counters summed over runs, ratios recomputed.
ClearingMetrics aggregate(std::span<const ClearingMetrics> runs);

using AnyGrasp = std::variant<ParallelGrasp, VacuumGrasp>;

// What a grasp planner proposes for the current scene state.
struct PlanResult {
  std::vector<AnyGrasp> ranked;  // best first
  std::vector<PointIndex> seeds;  // seed points of every gripper
};
using GraspPlanner = std::function<PlanResult(const PointCloud&, const SceneAnnotation&)>;

// Repeatedly executes the planner's top grasp; a success removes the grasped
// object's points and primitive. Stops when no object is left, the planner
// returns nothing, or after max_consecutive_failures failures in a row.
ClearingTrace run_clearing_loop(const PointCloud& cloud, const SceneAnnotation& scene, const GraspPlanner& planner,
                                const EvalConfig& cfg = {});

// Best gripper per object: for every object the trace that cleared it with
// the fewest attempts on it; uncleared objects count their fewest attempts.
// Attempts not aimed at an object are ignored. Throws when the traces do not
// cover the same objects.
ClearingMetrics combine_grippers_posthoc(std::span<const ClearingTrace> per_gripper);

// ---- reports ----

struct ApRow {
  std::string scene;
  Gripper gripper = Gripper::parallel;
  double mu = 0.0;
  double ap = 0.0;
};

// One row per (scene, gripper, mu): scene,gripper,mu,ap.
void write_ap_csv(std::ostream& os, std::span<const ApRow> rows);

struct ClearingRow {
  std::string scene;
  std::string policy;
  ClearingMetrics metrics;
};
void write_clearing_csv(std::ostream& os, std::span<const ClearingRow> rows);

}  // namespace multigrasp
