#include "multigrasp/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "multigrasp/collision.hpp"
#include "multigrasp/error.hpp"

namespace multigrasp {

void validate(const PipelineConfig& cfg) {
  validate(cfg.sampling);
  validate(cfg.refiner);
  if (!(cfg.normal_radius > 0.0) || !(cfg.feature_radius > 0.0)) throw Error("pipeline: radii must be positive");
  if (cfg.grippers.empty()) throw Error("pipeline: no gripper selected");
}

GraspnessMaps predict_maps(const MlpModel& model, const PointFeatures& features) {
  const Eigen::MatrixXd logits = model.map_logits(features);
  auto sigmoid = [](double z) { return 1.0 / (1.0 + std::exp(-z)); };
  GraspnessMaps maps;
  maps.role = MapRole::prediction;
  maps.objectness.resize(features.rows);
  maps.parallel.resize(features.rows);
  maps.vacuum.resize(features.rows);
  for (std::size_t i = 0; i < features.rows; ++i) {
    const auto c = static_cast<Eigen::Index>(i);
    maps.objectness[i] = sigmoid(logits(kObjectness, c));
    maps.parallel[i] = sigmoid(logits(kParallel, c));
    maps.vacuum[i] = sigmoid(logits(kVacuum, c));
  }
  return maps;
}

LearnedParallelHead::LearnedParallelHead(const MlpModel& model, const PointCloud& cloud,
                                         const PointFeatures& features, const SeedSet& seeds, const ViewGrid& grid,
                                         const ParallelRefinerConfig& cfg)
    : model_(&model), cloud_(&cloud), grid_(&grid), cfg_(cfg), seeds_(seeds.indices) {
  const MlpConfig& mc = model.config();
  if (!mc.refiner) throw Error("learned head: model has no refiner head");
  if (static_cast<std::size_t>(mc.views) != grid.size() || mc.angle_bins != cfg.angle_bins ||
      static_cast<std::size_t>(mc.depth_bins) != cfg.depth_bins.size() || mc.score_bins != cfg.score_bins) {
    throw Error("learned head: model head sizes do not match the refiner config");
  }
  std::sort(seeds_.begin(), seeds_.end());
  seeds_.erase(std::unique(seeds_.begin(), seeds_.end()), seeds_.end());
  std::vector<std::size_t> rows(seeds_.begin(), seeds_.end());
  const Eigen::MatrixXd out = model.refiner_outputs(features, rows);
  for (Eigen::Index k = 0; k < out.cols(); ++k) outputs_.push_back(out.col(k));
}

const Eigen::VectorXd& LearnedParallelHead::outputs_for(PointIndex seed) const {
  const auto it = std::lower_bound(seeds_.begin(), seeds_.end(), seed);
  if (it == seeds_.end() || *it != seed) throw Error("learned head: point is not a seed");
  return outputs_[static_cast<std::size_t>(it - seeds_.begin())];
}

std::vector<double> LearnedParallelHead::view_scores(PointIndex seed) const {
  const Eigen::VectorXd& o = outputs_for(seed);
  return {o.data(), o.data() + model_->config().views};
}

ParallelGrasp LearnedParallelHead::predict_grasp(const CylinderGroup& group, std::size_t view) const {
  if (group.members.empty()) throw NoSupport("cylinder group is empty");
  const MlpConfig& mc = model_->config();
  const Eigen::VectorXd& o = outputs_for(group.seed);
  auto seg = [&](int offset, int n) {
    return std::span<const double>(o.data() + offset, static_cast<std::size_t>(n));
  };
  ParallelGrasp g = decode_grasp(cloud_->points.at(group.seed), grid_->approach(view),
                                 seg(mc.angle_offset(), mc.angle_bins), seg(mc.depth_offset(), mc.depth_bins),
                                 o[mc.width_offset()] * kWidthUnit, seg(mc.score_offset(), mc.score_bins), cfg_);
  g.seed = group.seed;
  return g;
}

PipelineOutput run_pipeline(const PointCloud& cloud, const SceneAnnotation* scene, const MlpModel* model,
                            double table_height, const PipelineConfig& cfg) {
  validate(cfg);
  validate(cloud);
  if (!model && !scene) throw Error("pipeline: either a model or a scene annotation is required");

  PipelineOutput out;
  const KdTree index(cloud);
  std::optional<PointFeatures> features;
  if (model) {
    features = compute_features(cloud, index, table_height, cfg.feature_radius);
    out.maps = predict_maps(*model, *features);
  } else {
    const auto grasps = generate_ground_truth(cloud, *scene, cfg.ground_truth);
    out.maps = build_label_maps(cloud, *scene, grasps, cfg.labels);
  }

  const auto wants = [&](Gripper g) { return std::find(cfg.grippers.begin(), cfg.grippers.end(), g) != cfg.grippers.end(); };
  const std::size_t keep = cfg.top_k == 0 ? cloud.size() : cfg.top_k;

  if (wants(Gripper::parallel)) {
    const auto fused = fuse_scores(out.maps.objectness, out.maps.parallel);
    out.parallel_seeds = select_seeds(cloud, fused, cfg.sampling.t_parallel, cfg.sampling.m_parallel, Gripper::parallel);
    if (!out.parallel_seeds.empty()) {
      const ViewGrid grid = ViewGrid::fibonacci(cfg.refiner.num_views);
      std::vector<ParallelGrasp> grasps;
      if (model) {
        const LearnedParallelHead head(*model, cloud, *features, out.parallel_seeds, grid, cfg.refiner);
        grasps = refine_parallel_poses(cloud, index, out.parallel_seeds, head, grid, cfg.refiner);
      } else {
        const CollisionChecker checker(*scene, cfg.refiner.gripper);
        const OracleParallelHead head(cloud, *scene, checker, grid, cfg.refiner);
        grasps = refine_parallel_poses(cloud, index, out.parallel_seeds, head, grid, cfg.refiner);
      }
      out.parallel = rank_parallel(std::move(grasps), keep);
    }
  }
  if (wants(Gripper::vacuum)) {
    const auto fused = fuse_scores(out.maps.objectness, out.maps.vacuum);
    out.vacuum_seeds = select_seeds(cloud, fused, cfg.sampling.t_vacuum, cfg.sampling.m_vacuum, Gripper::vacuum);
    if (!out.vacuum_seeds.empty()) {
      VacuumRefinement r = refine_vacuum_poses(cloud, index, out.vacuum_seeds, cfg.normal_radius);
      out.vacuum_dropped = r.dropped;
      out.vacuum = rank_vacuum(std::move(r.grasps), keep);
    }
  }
  return out;
}

}  // namespace multigrasp
