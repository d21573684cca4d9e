#include "multigrasp/seed_sampling.hpp"

#include <string>

#include "multigrasp/error.hpp"
#include "multigrasp/fps.hpp"

namespace multigrasp {

void validate(const SamplingConfig& cfg) {
  for (double t : {cfg.t_parallel, cfg.t_vacuum}) {
    if (!(t >= 0.0 && t <= 1.0)) throw Error("sampling threshold must lie in [0, 1]");
  }
  if (cfg.m_parallel < 1 || cfg.m_vacuum < 1) throw Error("seed counts must be >= 1");
}

std::vector<double> fuse_scores(std::span<const double> objectness, std::span<const double> graspness) {
  if (objectness.size() != graspness.size()) {
    throw Error("fuse_scores: length mismatch (" + std::to_string(objectness.size()) + " vs " +
                std::to_string(graspness.size()) + ")");
  }
  std::vector<double> out(objectness.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = objectness[i] * graspness[i];
  return out;
}

SeedSet select_seeds(const PointCloud& cloud, std::span<const double> fused, double threshold, std::size_t m,
                     Gripper gripper) {
  if (fused.size() != cloud.size()) throw Error("select_seeds: score count does not match cloud size");
  SeedSet seeds;
  seeds.gripper = gripper;
  std::vector<PointIndex> candidates;
  for (std::size_t i = 0; i < fused.size(); ++i) {
    if (fused[i] > threshold) candidates.push_back(static_cast<PointIndex>(i));
  }
  seeds.indices = candidates.size() <= m ? std::move(candidates) : farthest_point_sampling(cloud, candidates, m);
  seeds.fused_scores.reserve(seeds.indices.size());
  for (auto i : seeds.indices) seeds.fused_scores.push_back(fused[i]);
  return seeds;
}

}  // namespace multigrasp
