#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "multigrasp/features.hpp"
#include "multigrasp/ground_truth.hpp"
#include "multigrasp/labels.hpp"
#include "multigrasp/losses.hpp"
#include "multigrasp/mlp.hpp"

namespace multigrasp {

struct TrainConfig {
  double lr = 5e-4;
  int epochs = 22;
  int batch_size = 12;  // scenes per optimizer step
  double positive_weight = 10.0;
  bool pcgrad = true;
  std::uint64_t seed = 0;
  MlpConfig mlp;
  double w_objectness = 1.0, w_vacuum = 1.0, w_parallel = 1.0;
  RefinerWeights refiner_weights;
  double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;
  Execution exec = Execution::parallel;
};

void validate(const TrainConfig& cfg);

// Learning rate of epoch e (0-based): lr * 0.5 * (1 + cos(pi * e / epochs)).
double cosine_lr(double lr0, int epoch, int epochs);

// One scene ready for training: raw features, label maps and refiner
// supervision for a few seed points.
struct TrainingScene {
  PointFeatures features;
  GraspnessMaps labels;
  std::vector<std::size_t> refiner_rows;
  std::vector<RefinerTarget> refiner_targets;
};

struct ScenePrepConfig {
  GroundTruthConfig ground_truth;
  LabelConfig labels;
  ParallelRefinerConfig refiner;
  // Seeds (farthest point sampled among positive parallel points) that get
  // refiner targets.
  std::size_t refiner_seeds = 32;
  double feature_radius = 0.01;
};

// Width targets are expressed in this unit (decimeters) so the width
// residual is on the scale of the other refiner outputs.
constexpr double kWidthUnit = 0.1;

TrainingScene prepare_training_scene(const PointCloud& cloud, const SceneAnnotation& scene,
                                     const ScenePrepConfig& cfg = {});

// Same, reusing labels built elsewhere.
TrainingScene prepare_training_scene(const PointCloud& cloud, const SceneAnnotation& scene, GraspnessMaps labels,
                                     const ScenePrepConfig& cfg);

struct EpochLog {
  int epoch = 0;
  double lr = 0.0;
  double loss_obj = 0.0, loss_vac = 0.0, loss_par = 0.0, loss_refiner = 0.0;
  double total() const { return loss_obj + loss_vac + loss_par + loss_refiner; }
};

struct TrainResult {
  MlpModel model;
  std::vector<EpochLog> history;
};

// Refiner-head biases start at the training-set priors (mean targets, bin
// frequencies); see MlpModel::initialized for the rest.
// Adam on the scene-averaged losses. The parallel task owns the parallel
// graspness and refiner losses, the vacuum task the vacuum loss, and each
// takes half of the objectness loss. With pcgrad the task gradients of the
// shared parameters are combined by gradient surgery (scaled by the task
// count, so non-conflicting gradients add up exactly as without it).
// Throws NonFiniteLoss if any loss stops being finite.
TrainResult train(const std::vector<TrainingScene>& scenes, const TrainConfig& cfg);

// CSV: "# variant=PCGrad" or "# variant=w/o PCGrad", then
// epoch,lr,loss_obj,loss_vac,loss_par,loss_refiner.
void write_training_log(std::ostream& os, const std::vector<EpochLog>& history, bool pcgrad);

}  // namespace multigrasp
