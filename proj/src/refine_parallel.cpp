#include "multigrasp/refine_parallel.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include "multigrasp/error.hpp"

namespace multigrasp {

void validate(const ParallelRefinerConfig& cfg) {
  if (cfg.num_views < 1 || cfg.angle_bins < 1 || cfg.score_bins < 1) throw Error("refiner: bin counts must be >= 1");
  if (cfg.depth_bins.empty()) throw Error("refiner: no depth bins");
  if (!(cfg.cylinder_radius > 0.0) || !(cfg.cylinder_height > 0.0)) throw Error("refiner: cylinder must be positive");
  if (!(cfg.gripper.max_width > 0.0)) throw Error("refiner: max width must be positive");
  if (!(cfg.mu_max > 0.0)) throw Error("refiner: mu_max must be positive");
}

ViewGrid ViewGrid::fibonacci(int count) {
  if (count < 1) throw Error("view grid needs at least one view");
  ViewGrid grid;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (i + 0.5) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    grid.views_.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  return grid;
}

std::size_t select_view(std::span<const double> scores) {
  if (scores.empty()) throw Error("select_view: no scores");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

CylinderGroup cylinder_group(const PointCloud& cloud, const KdTree& index, PointIndex seed, const UnitVector3& view,
                             double radius, double height) {
  if (!(radius > 0.0) || !(height > 0.0)) throw Error("cylinder_group: radius and height must be positive");
  CylinderGroup g;
  g.seed = seed;
  g.view = view;
  g.radius = radius;
  g.height = height;
  const Point3& s = cloud.points.at(seed);
  const double half = 0.5 * height;
  for (auto i : index.radius_query(s, std::hypot(radius, half))) {
    const Vec3 d = cloud.points[i] - s;
    const double along = view.dot(d);
    if (std::abs(along) <= half && (d - along * view.vec()).norm() <= radius) g.members.push_back(i);
  }
  return g;
}

double friction_to_score(double required_friction, double mu_max) {
  if (!std::isfinite(required_friction)) return 0.0;
  return std::clamp(1.0 - required_friction / mu_max, 0.0, 1.0);
}

int score_to_bin(double score, int bins) {
  return std::clamp(static_cast<int>(std::floor(score * bins)), 0, bins - 1);
}

double angle_of_bin(int bin, int bins) { return 180.0 * bin / bins; }

namespace {

std::size_t argmax(std::span<const double> v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

ParallelGrasp decode_grasp(const Point3& center, const UnitVector3& approach, std::span<const double> angle_logits,
                           std::span<const double> depth_logits, double width, std::span<const double> score_logits,
                           const ParallelRefinerConfig& cfg) {
  if (angle_logits.size() != static_cast<std::size_t>(cfg.angle_bins) || depth_logits.size() != cfg.depth_bins.size() ||
      score_logits.size() != static_cast<std::size_t>(cfg.score_bins)) {
    throw Error("decode_grasp: head output sizes do not match the refiner config");
  }
  ParallelGrasp g;
  g.center = center;
  g.approach = approach;
  g.angle_deg = angle_of_bin(static_cast<int>(argmax(angle_logits)), cfg.angle_bins);
  g.depth = cfg.depth_bins[argmax(depth_logits)];
  constexpr double kMinWidth = 1e-3;
  g.width = std::clamp(std::isfinite(width) ? width : cfg.gripper.max_width, kMinWidth, cfg.gripper.max_width);

  const double top = *std::max_element(score_logits.begin(), score_logits.end());
  double z = 0.0, expect = 0.0;
  for (std::size_t k = 0; k < score_logits.size(); ++k) {
    const double e = std::exp(score_logits[k] - top);
    z += e;
    expect += e * (static_cast<double>(k) + 0.5) / cfg.score_bins;
  }
  g.score = std::clamp(expect / z, 0.0, 1.0);
  return g;
}

OracleParallelHead::OracleParallelHead(const PointCloud& cloud, const SceneAnnotation& scene,
                                       const CollisionChecker& checker, const ViewGrid& grid,
                                       const ParallelRefinerConfig& cfg)
    : cloud_(&cloud), scene_(&scene), checker_(&checker), grid_(&grid), cfg_(cfg) {
  validate(cfg_);
}

std::optional<OracleCandidate> OracleParallelHead::best_along_view(const Point3& seed_point, std::size_t view) const {
  struct Entry {
    OracleCandidate c;
    double t_enter, t_exit;
  };
  std::vector<Entry> found;
  const UnitVector3 approach = grid_->approach(view);
  const double max_width = cfg_.gripper.max_width;
  for (int a = 0; a < cfg_.angle_bins; ++a) {
    const Vec3 b = closing_axis(approach, angle_of_bin(a, cfg_.angle_bins));
    for (std::size_t d = 0; d < cfg_.depth_bins.size(); ++d) {
      const Point3 q = seed_point + cfg_.depth_bins[d] * approach.vec();
      ParallelContact contact;
      try {
        contact = parallel_contact(*scene_, q, b, max_width);
      } catch (const NoContact&) {
        continue;
      }
      if (!std::isfinite(contact.required_friction)) continue;
      const double span = 2.0 * std::max(std::abs(contact.t_enter), std::abs(contact.t_exit));
      OracleCandidate c;
      c.angle_bin = a;
      c.depth_bin = static_cast<int>(d);
      c.width = std::min(span + cfg_.width_margin, max_width);
      c.required_friction = contact.required_friction;
      c.score = friction_to_score(contact.required_friction, cfg_.mu_max);
      found.push_back({c, contact.t_enter, contact.t_exit});
    }
  }
  std::stable_sort(found.begin(), found.end(), [](const Entry& x, const Entry& y) {
    return x.c.required_friction < y.c.required_friction;
  });
  for (const auto& e : found) {
    ParallelGrasp g;
    g.center = seed_point;
    g.approach = approach;
    g.angle_deg = angle_of_bin(e.c.angle_bin, cfg_.angle_bins);
    g.depth = cfg_.depth_bins[static_cast<std::size_t>(e.c.depth_bin)];
    g.width = e.c.width;
    if (!checker_->parallel_collides(g, e.t_enter, e.t_exit)) return e.c;
  }
  return std::nullopt;
}

std::vector<double> OracleParallelHead::view_scores_at(const Point3& seed_point) const {
  std::vector<double> scores(grid_->size(), 0.0);
  const Primitive* prim = scene_->find(surface_object_at(*scene_, seed_point, 0.003));
  if (!prim) return scores;
  const Vec3 inward = -closest_surface_point(*prim, seed_point).normal;
  const double min_cos = std::cos(deg2rad(cfg_.max_approach_angle_deg));
  for (std::size_t v = 0; v < grid_->size(); ++v) {
    if (grid_->approach(v).dot(inward) < min_cos) continue;
    if (const auto best = best_along_view(seed_point, v)) {
      if (best->score > 0.0) {
        scores[v] = static_cast<double>(score_to_bin(best->score, cfg_.score_bins) + 1) / cfg_.score_bins;
      }
    }
  }
  return scores;
}

std::vector<double> OracleParallelHead::view_scores(PointIndex seed) const {
  return view_scores_at(cloud_->points.at(seed));
}

ParallelGrasp OracleParallelHead::predict_grasp(const CylinderGroup& group, std::size_t view) const {
  if (group.members.empty()) throw NoSupport("cylinder group is empty");
  ParallelGrasp g;
  g.center = cloud_->points.at(group.seed);
  g.approach = grid_->approach(view);
  g.seed = group.seed;
  if (const auto best = best_along_view(g.center, view)) {
    g.angle_deg = angle_of_bin(best->angle_bin, cfg_.angle_bins);
    g.depth = cfg_.depth_bins[static_cast<std::size_t>(best->depth_bin)];
    g.width = best->width;
    g.score = best->score;
  } else {
    g.depth = cfg_.depth_bins.front();
    g.width = cfg_.gripper.max_width;
    g.score = 0.0;
  }
  return g;
}

std::vector<ParallelGrasp> refine_parallel_poses(const PointCloud& cloud, const KdTree& index, const SeedSet& seeds,
                                                 const ParallelGraspHead& head, const ViewGrid& grid,
                                                 const ParallelRefinerConfig& cfg) {
  if (seeds.gripper != Gripper::parallel) throw Error("refine_parallel_poses: seed set is not for the parallel gripper");
  const auto n = static_cast<std::ptrdiff_t>(seeds.size());
  std::vector<std::optional<ParallelGrasp>> out(seeds.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      const PointIndex seed = seeds.indices[static_cast<std::size_t>(i)];
      const auto scores = head.view_scores(seed);
      const std::size_t view = select_view(scores);
      const auto group = cylinder_group(cloud, index, seed, grid.view(view), cfg.cylinder_radius, cfg.cylinder_height);
      ParallelGrasp g = head.predict_grasp(group, view);
      g.seed = seed;
      out[static_cast<std::size_t>(i)] = g;
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<ParallelGrasp> grasps;
  for (auto& g : out) {
    if (g && g->score > 0.0) grasps.push_back(*g);
  }
  return grasps;
}

std::vector<ParallelGrasp> rank_parallel(std::vector<ParallelGrasp> grasps, std::size_t k) {
  std::stable_sort(grasps.begin(), grasps.end(), [](const ParallelGrasp& a, const ParallelGrasp& b) {
    return a.score > b.score || (a.score == b.score && a.seed < b.seed);
  });
  if (grasps.size() > k) grasps.resize(k);
  return grasps;
}

}  // namespace multigrasp
