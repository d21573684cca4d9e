#include "multigrasp/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>

#include "multigrasp/error.hpp"
#include "multigrasp/fps.hpp"
#include "multigrasp/pcgrad.hpp"

namespace multigrasp {

void validate(const TrainConfig& cfg) {
  if (!(cfg.lr > 0.0)) throw Error("train: lr must be positive");
  if (cfg.epochs < 1) throw Error("train: epochs must be at least 1");
  if (cfg.batch_size < 1) throw Error("train: batch size must be at least 1");
  if (!(cfg.positive_weight > 0.0)) throw Error("train: positive weight must be positive");
  validate(cfg.mlp);
}

double cosine_lr(double lr0, int epoch, int epochs) {
  return lr0 * 0.5 * (1.0 + std::cos(std::acos(-1.0) * epoch / epochs));
}

TrainingScene prepare_training_scene(const PointCloud& cloud, const SceneAnnotation& scene,
                                     const ScenePrepConfig& cfg) {
  const auto grasps = generate_ground_truth(cloud, scene, cfg.ground_truth);
  return prepare_training_scene(cloud, scene, build_label_maps(cloud, scene, grasps, cfg.labels), cfg);
}

TrainingScene prepare_training_scene(const PointCloud& cloud, const SceneAnnotation& scene, GraspnessMaps labels,
                                     const ScenePrepConfig& cfg) {
  validate(scene, cloud);
  if (labels.size() != cloud.size()) throw Error("prepare_training_scene: label length mismatch");
  TrainingScene ts;
  const KdTree index(cloud);
  ts.features = compute_features(cloud, index, scene.table_height, cfg.feature_radius);
  ts.labels = std::move(labels);

  std::vector<PointIndex> positive;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (ts.labels.parallel[i] > 0.0) positive.push_back(static_cast<PointIndex>(i));
  }
  if (positive.empty() || cfg.refiner_seeds == 0) return ts;
  const auto seeds = farthest_point_sampling(cloud, positive, std::min(cfg.refiner_seeds, positive.size()));

  const CollisionChecker checker(scene, cfg.refiner.gripper);
  const ViewGrid grid = ViewGrid::fibonacci(cfg.refiner.num_views);
  const OracleParallelHead oracle(cloud, scene, checker, grid, cfg.refiner);
  std::vector<std::optional<RefinerTarget>> targets(seeds.size());
  const auto n = static_cast<std::ptrdiff_t>(seeds.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const Point3& p = cloud.points[seeds[ku]];
    RefinerTarget t;
    t.view_scores = oracle.view_scores_at(p);
    if (*std::max_element(t.view_scores.begin(), t.view_scores.end()) <= 0.0) continue;
    const std::size_t view = select_view(t.view_scores);
    const auto best = oracle.best_along_view(p, view);
    if (!best) continue;
    t.angle_bin = best->angle_bin;
    t.depth_bin = best->depth_bin;
    t.width = best->width / kWidthUnit;
    t.score_bin = score_to_bin(best->score, cfg.refiner.score_bins);
    targets[ku] = std::move(t);
  }
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    if (!targets[k]) continue;
    ts.refiner_rows.push_back(seeds[k]);
    ts.refiner_targets.push_back(std::move(*targets[k]));
  }
  return ts;
}

namespace {

struct SceneGrad {
  std::vector<double> parallel_task, vacuum_task;
  EpochLog loss;
};

void check_finite(double v, const char* name, int epoch, std::size_t scene) {
  if (!std::isfinite(v)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "non-finite %s loss at epoch %d, scene %zu", name, epoch, scene);
    throw NonFiniteLoss(buf);
  }
}

SceneGrad scene_gradient(const MlpModel& model, const TrainingScene& ts, const TrainConfig& cfg, int epoch,
                         std::size_t scene_id) {
  const MlpConfig& mc = model.config();
  const std::size_t n = ts.features.rows;
  if (ts.labels.size() != n) throw Error("train: label length does not match features");
  const Eigen::MatrixXd logits = model.map_logits(ts.features);
  std::vector<double> z_obj(n), z_par(n), z_vac(n);
  for (std::size_t i = 0; i < n; ++i) {
    z_obj[i] = logits(kObjectness, static_cast<Eigen::Index>(i));
    z_par[i] = logits(kParallel, static_cast<Eigen::Index>(i));
    z_vac[i] = logits(kVacuum, static_cast<Eigen::Index>(i));
  }
  const LossGrad obj = loss_objectness(z_obj, ts.labels.objectness);
  const LossGrad par = loss_parallel_graspness(z_par, ts.labels.parallel, cfg.positive_weight);
  const LossGrad vac = loss_vacuum(z_vac, ts.labels.vacuum);

  SceneGrad sg;
  sg.loss.loss_obj = obj.value;
  sg.loss.loss_par = par.value;
  sg.loss.loss_vac = vac.value;

  Eigen::MatrixXd d_par = Eigen::MatrixXd::Zero(kMapChannels, static_cast<Eigen::Index>(n));
  Eigen::MatrixXd d_vac = Eigen::MatrixXd::Zero(kMapChannels, static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<Eigen::Index>(i);
    d_par(kObjectness, c) = 0.5 * cfg.w_objectness * obj.grad[i];
    d_vac(kObjectness, c) = 0.5 * cfg.w_objectness * obj.grad[i];
    d_par(kParallel, c) = cfg.w_parallel * par.grad[i];
    d_vac(kVacuum, c) = cfg.w_vacuum * vac.grad[i];
  }

  std::vector<std::size_t> rows;
  Eigen::MatrixXd d_ref;
  if (mc.refiner && !ts.refiner_rows.empty()) {
    rows = ts.refiner_rows;
    const Eigen::MatrixXd out = model.refiner_outputs(ts.features, rows);
    d_ref.resize(out.rows(), out.cols());
    const double inv = 1.0 / static_cast<double>(rows.size());
    for (Eigen::Index k = 0; k < out.cols(); ++k) {
      const Eigen::VectorXd col = out.col(k);
      const LossGrad lr = loss_refiner({col.data(), static_cast<std::size_t>(col.size())},
                                       ts.refiner_targets[static_cast<std::size_t>(k)], mc.views, mc.angle_bins,
                                       mc.depth_bins, mc.score_bins, cfg.refiner_weights);
      sg.loss.loss_refiner += inv * lr.value;
      for (Eigen::Index r = 0; r < out.rows(); ++r) d_ref(r, k) = inv * lr.grad[static_cast<std::size_t>(r)];
    }
  }
  check_finite(sg.loss.loss_obj, "objectness", epoch, scene_id);
  check_finite(sg.loss.loss_par, "parallel", epoch, scene_id);
  check_finite(sg.loss.loss_vac, "vacuum", epoch, scene_id);
  check_finite(sg.loss.loss_refiner, "refiner", epoch, scene_id);

  sg.parallel_task.assign(model.param_count(), 0.0);
  sg.vacuum_task.assign(model.param_count(), 0.0);
  model.accumulate_gradient(ts.features, d_par, rows, d_ref, sg.parallel_task, cfg.exec);
  model.accumulate_gradient(ts.features, d_vac, {}, Eigen::MatrixXd(), sg.vacuum_task, cfg.exec);
  return sg;
}

// Refiner output biases start at training-set priors: mean targets for view
// scores and width, log class frequencies (add-one smoothed) for the angle,
// depth and score bins. Map biases stay at zero.
void init_output_priors(MlpModel& model, const std::vector<TrainingScene>& scenes) {
  auto& p = model.params();
  const MlpConfig& c = model.config();
  if (!c.refiner) return;
  std::vector<double> view(static_cast<std::size_t>(c.views), 0.0);
  std::vector<double> angle(static_cast<std::size_t>(c.angle_bins), 1.0), depth(static_cast<std::size_t>(c.depth_bins), 1.0),
      score(static_cast<std::size_t>(c.score_bins), 1.0);
  double width = 0.0, count = 0.0;
  for (const auto& s : scenes) {
    for (const auto& t : s.refiner_targets) {
      for (std::size_t v = 0; v < view.size(); ++v) view[v] += t.view_scores[v];
      angle[static_cast<std::size_t>(t.angle_bin)] += 1.0;
      depth[static_cast<std::size_t>(t.depth_bin)] += 1.0;
      score[static_cast<std::size_t>(t.score_bin)] += 1.0;
      width += t.width;
      count += 1.0;
    }
  }
  if (count == 0.0) return;
  const auto& rh = model.refiner_head();
  const std::size_t rb = rh.offset + static_cast<std::size_t>(rh.in) * static_cast<std::size_t>(rh.out);
  for (std::size_t v = 0; v < view.size(); ++v) p[rb + v] = view[v] / count;
  auto log_freq = [&](const std::vector<double>& h, int offset) {
    double total = 0.0;
    for (double x : h) total += x;
    for (std::size_t k = 0; k < h.size(); ++k) p[rb + static_cast<std::size_t>(offset) + k] = std::log(h[k] / total);
  };
  log_freq(angle, c.angle_offset());
  log_freq(depth, c.depth_offset());
  log_freq(score, c.score_offset());
  p[rb + static_cast<std::size_t>(c.width_offset())] = width / count;
}

}  // namespace

TrainResult train(const std::vector<TrainingScene>& scenes, const TrainConfig& cfg) {
  validate(cfg);
  if (scenes.empty()) throw Error("train: no training scenes");

  std::mt19937_64 rng(cfg.seed);
  TrainResult result{MlpModel::initialized(cfg.mlp, rng()), {}};
  // Task orders get their own stream so switching surgery off leaves the
  // scene order untouched.
  std::mt19937_64 surgery_rng(rng());
  MlpModel& model = result.model;
  std::vector<const PointFeatures*> sets;
  for (const auto& s : scenes) sets.push_back(&s.features);
  model.scaler = FeatureScaler::fit(sets);
  init_output_priors(model, scenes);

  const std::size_t P = model.param_count();
  const std::vector<char> shared = model.shared_mask();
  std::vector<double> m(P, 0.0), v(P, 0.0);
  std::vector<std::size_t> order(scenes.size());
  std::iota(order.begin(), order.end(), 0);
  long step = 0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = cosine_lr(cfg.lr, epoch, cfg.epochs);
    std::shuffle(order.begin(), order.end(), rng);
    EpochLog log;
    log.epoch = epoch + 1;
    log.lr = lr;
    int batches = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      const double inv = 1.0 / static_cast<double>(end - start);
      std::vector<double> g_par(P, 0.0), g_vac(P, 0.0);
      EpochLog batch;
      for (std::size_t b = start; b < end; ++b) {
        const SceneGrad sg = scene_gradient(model, scenes[order[b]], cfg, epoch + 1, order[b]);
        for (std::size_t i = 0; i < P; ++i) {
          g_par[i] += inv * sg.parallel_task[i];
          g_vac[i] += inv * sg.vacuum_task[i];
        }
        batch.loss_obj += inv * sg.loss.loss_obj;
        batch.loss_vac += inv * sg.loss.loss_vac;
        batch.loss_par += inv * sg.loss.loss_par;
        batch.loss_refiner += inv * sg.loss.loss_refiner;
      }

      std::vector<double> grad(P);
      for (std::size_t i = 0; i < P; ++i) grad[i] = g_par[i] + g_vac[i];
      if (cfg.pcgrad) {
        GradientSet tasks(2);
        for (std::size_t i = 0; i < P; ++i) {
          if (!shared[i]) continue;
          tasks[0].push_back(g_par[i]);
          tasks[1].push_back(g_vac[i]);
        }
        const std::vector<double> surgery = pcgrad(tasks, surgery_rng);
        std::size_t k = 0;
        for (std::size_t i = 0; i < P; ++i) {
          if (shared[i]) grad[i] = static_cast<double>(tasks.size()) * surgery[k++];
        }
      }

      ++step;
      const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
      auto& params = model.params();
      for (std::size_t i = 0; i < P; ++i) {
        m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * grad[i];
        v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
        params[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + cfg.adam_eps);
      }
      log.loss_obj += batch.loss_obj;
      log.loss_vac += batch.loss_vac;
      log.loss_par += batch.loss_par;
      log.loss_refiner += batch.loss_refiner;
      ++batches;
    }
    log.loss_obj /= batches;
    log.loss_vac /= batches;
    log.loss_par /= batches;
    log.loss_refiner /= batches;
    result.history.push_back(log);
  }
  return result;
}

void write_training_log(std::ostream& os, const std::vector<EpochLog>& history, bool pcgrad) {
  os << "# variant=" << (pcgrad ? "PCGrad" : "w/o PCGrad") << '\n';
  os << "epoch,lr,loss_obj,loss_vac,loss_par,loss_refiner\n";
  char buf[256];
  for (const auto& e : history) {
    std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g,%.10g,%.10g,%.10g\n", e.epoch, e.lr, e.loss_obj, e.loss_vac,
                  e.loss_par, e.loss_refiner);
    os << buf;
  }
}

}  // namespace multigrasp
