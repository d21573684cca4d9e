#pragma once

#include <optional>
#include <vector>

#include "multigrasp/labels.hpp"
#include "multigrasp/mlp.hpp"
#include "multigrasp/refine_parallel.hpp"
#include "multigrasp/refine_vacuum.hpp"
#include "multigrasp/train.hpp"

namespace multigrasp {

struct PipelineConfig {
  SamplingConfig sampling;
  ParallelRefinerConfig refiner;
  double normal_radius = kDefaultNormalRadius;
  double feature_radius = 0.01;
  // Ground truth and labels used as stand-in maps when no model is given.
  GroundTruthConfig ground_truth;
  LabelConfig labels;
  std::vector<Gripper> grippers = {Gripper::parallel, Gripper::vacuum};
  // Grasps kept per gripper after ranking (0 keeps all).
  std::size_t top_k = 50;
};

void validate(const PipelineConfig& cfg);

struct PipelineOutput {
  GraspnessMaps maps;
  SeedSet parallel_seeds{Gripper::parallel, {}, {}};
  SeedSet vacuum_seeds{Gripper::vacuum, {}, {}};
  std::vector<ParallelGrasp> parallel;  // ranked
  std::vector<VacuumGrasp> vacuum;      // ranked
  std::size_t vacuum_dropped = 0;
};

// Sigmoid of the model's map logits.
GraspnessMaps predict_maps(const MlpModel& model, const PointFeatures& features);

// Parallel head reading the model's refiner outputs: view scores from the
// view logits, grasp from the angle/depth/score bins and the width output.
class LearnedParallelHead final : public ParallelGraspHead {
 public:
  LearnedParallelHead(const MlpModel& model, const PointCloud& cloud, const PointFeatures& features,
                      const SeedSet& seeds, const ViewGrid& grid, const ParallelRefinerConfig& cfg);
  std::vector<double> view_scores(PointIndex seed) const override;
  ParallelGrasp predict_grasp(const CylinderGroup& group, std::size_t view) const override;

 private:
  const Eigen::VectorXd& outputs_for(PointIndex seed) const;

  const MlpModel* model_;
  const PointCloud* cloud_;
  const ViewGrid* grid_;
  ParallelRefinerConfig cfg_;
  std::vector<PointIndex> seeds_;  // ascending
  std::vector<Eigen::VectorXd> outputs_;
};

// maps -> fused scores -> seeds -> refinement -> ranking, for each requested
// gripper. With a model its map and refiner heads drive everything. Without
// one, the scene's ground-truth label maps stand in for the predicted maps
// and the oracle head refines parallel seeds; `scene` is then required.
PipelineOutput run_pipeline(const PointCloud& cloud, const SceneAnnotation* scene, const MlpModel* model,
                            double table_height, const PipelineConfig& cfg = {});

}  // namespace multigrasp
