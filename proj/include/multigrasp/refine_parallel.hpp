#pragma once

#include <optional>
#include <span>
#include <vector>

#include "multigrasp/collision.hpp"
#include "multigrasp/grasp.hpp"
#include "multigrasp/scene.hpp"
#include "multigrasp/seed_sampling.hpp"

namespace multigrasp {

struct ParallelRefinerConfig {
  int num_views = 300;
  int angle_bins = 12;
  std::vector<double> depth_bins = {0.01, 0.02, 0.03, 0.04};
  double cylinder_radius = 0.05;
  double cylinder_height = 0.04;
  // Fallback width = jaw span needed to enclose the contacts + margin.
  double width_margin = 0.005;
  // Required friction mu maps to score max(0, 1 - mu / mu_max).
  double mu_max = 1.0;
  // Oracle enumeration only considers approaches within this angle of the
  // inward surface normal at the seed.
  double max_approach_angle_deg = 60.0;
  int score_bins = 10;
  GripperGeometry gripper;
};

void validate(const ParallelRefinerConfig& cfg);

// Fibonacci lattice over the upper hemisphere. A view is the direction from
// the grasp point toward the gripper; the approach vector is its negation.
// Index 0 is closest to +z.
class ViewGrid {
 public:
  static ViewGrid fibonacci(int count);

  std::size_t size() const { return views_.size(); }
  const UnitVector3& view(std::size_t i) const { return views_[i]; }
  UnitVector3 approach(std::size_t i) const { return -views_[i]; }

 private:
  std::vector<UnitVector3> views_;
};

// Argmax with lowest-index ties. Throws on empty input.
std::size_t select_view(std::span<const double> scores);

struct CylinderGroup {
  PointIndex seed = 0;
  UnitVector3 view;
  std::vector<PointIndex> members;  // ascending
  double radius = 0.0, height = 0.0;
};

// Points whose offset from the seed projects into [-height/2, height/2]
// along the view axis and lies within `radius` of that axis.
CylinderGroup cylinder_group(const PointCloud& cloud, const KdTree& index, PointIndex seed, const UnitVector3& view,
                             double radius, double height);

double friction_to_score(double required_friction, double mu_max);
int score_to_bin(double score, int bins);

// Angle of bin k out of A: 180 * k / A degrees.
double angle_of_bin(int bin, int bins);

// Decodes grasp head outputs: argmax angle and depth bins, width clamped to
// (0, max_width], score = softmax expectation over score-bin centers.
ParallelGrasp decode_grasp(const Point3& center, const UnitVector3& approach, std::span<const double> angle_logits,
                           std::span<const double> depth_logits, double width, std::span<const double> score_logits,
                           const ParallelRefinerConfig& cfg);

// Per-seed parallel pose predictor used by refine_parallel_poses.
class ParallelGraspHead {
 public:
  virtual ~ParallelGraspHead() = default;
  // One score per view of the grid.
  virtual std::vector<double> view_scores(PointIndex seed) const = 0;
  virtual ParallelGrasp predict_grasp(const CylinderGroup& group, std::size_t view) const = 0;
};

// Best collision-free grasp found by exhaustive (angle, depth) search.
struct OracleCandidate {
  int angle_bin = 0;
  int depth_bin = 0;
  double width = 0.0;
  double required_friction = 0.0;
  double score = 0.0;
};

// Geometric fallback head: scores views and grasp bins with the analytic
// friction oracle and the collision checker. Needs the scene ground truth.
class OracleParallelHead final : public ParallelGraspHead {
 public:
  OracleParallelHead(const PointCloud& cloud, const SceneAnnotation& scene, const CollisionChecker& checker,
                     const ViewGrid& grid, const ParallelRefinerConfig& cfg);

  // Minimum required friction over all (angle, depth) bins for this view,
  // skipping colliding candidates; ties keep the lowest (angle, depth).
  std::optional<OracleCandidate> best_along_view(const Point3& seed_point, std::size_t view) const;

  // Score of best_along_view per view, quantized to the upper edge of its
  // score bin; 0 when no positive-score grasp exists or outside the
  // approach cone.
  std::vector<double> view_scores(PointIndex seed) const override;
  ParallelGrasp predict_grasp(const CylinderGroup& group, std::size_t view) const override;

  std::vector<double> view_scores_at(const Point3& seed_point) const;

 private:
  const PointCloud* cloud_;
  const SceneAnnotation* scene_;
  const CollisionChecker* checker_;
  const ViewGrid* grid_;
  ParallelRefinerConfig cfg_;
};

// select_view -> cylinder_group -> predict_grasp for every seed (seeds are
// processed in parallel; output order follows the seed set). Grasps with
// score 0 are dropped.
std::vector<ParallelGrasp> refine_parallel_poses(const PointCloud& cloud, const KdTree& index, const SeedSet& seeds,
                                                 const ParallelGraspHead& head, const ViewGrid& grid,
                                                 const ParallelRefinerConfig& cfg);

// Descending score, ties by seed index; at most k.
std::vector<ParallelGrasp> rank_parallel(std::vector<ParallelGrasp> grasps, std::size_t k);

}  // namespace multigrasp
