#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "multigrasp/features.hpp"

namespace multigrasp {

// Output row layout of the map head.
enum MapChannel : int { kObjectness = 0, kParallel = 1, kVacuum = 2, kMapChannels = 3 };

struct MlpConfig {
  std::vector<int> hidden = {64, 64};
  bool refiner = true;
  int views = 300;
  int angle_bins = 12;
  int depth_bins = 4;
  int score_bins = 10;

  // Refiner output rows: [views | angles | depths | width | scores].
  int refiner_outputs() const { return views + angle_bins + depth_bins + 1 + score_bins; }
  int angle_offset() const { return views; }
  int depth_offset() const { return views + angle_bins; }
  int width_offset() const { return views + angle_bins + depth_bins; }
  int score_offset() const { return width_offset() + 1; }
};

void validate(const MlpConfig& cfg);

// Dense tanh network over standardized point features with a 3-logit map
// head and an optional refiner head on the last hidden layer. All
// parameters live in one flat vector; each layer stores its weight matrix
// row-major (out x in) followed by its bias.
class MlpModel {
 public:
  struct Layer {
    int in = 0, out = 0;
    std::size_t offset = 0;
    std::size_t size() const { return static_cast<std::size_t>(in + 1) * static_cast<std::size_t>(out); }
  };

  explicit MlpModel(MlpConfig cfg = {});
  // Glorot-uniform trunk weights; zero biases and zero output heads, so the
  // initial prediction is the same for every point.
  static MlpModel initialized(MlpConfig cfg, std::uint64_t seed);

  const MlpConfig& config() const { return cfg_; }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }
  std::size_t param_count() const { return params_.size(); }
  const std::vector<Layer>& trunk() const { return trunk_; }
  const Layer& map_head() const { return map_; }
  const Layer& refiner_head() const { return refiner_; }

  // Parameters whose gradient both tasks contribute to: the trunk and the
  // objectness row of the map head.
  std::vector<char> shared_mask() const;

  FeatureScaler scaler;

  // kMapChannels x N logits.
  Eigen::MatrixXd map_logits(const PointFeatures& f) const;
  // refiner_outputs x |rows| raw outputs for the given points.
  Eigen::MatrixXd refiner_outputs(const PointFeatures& f, std::span<const std::size_t> rows) const;

  // grad += d(loss)/d(params) given d(loss)/d(map logits) (kMapChannels x N)
  // and, optionally, d(loss)/d(refiner outputs) for `rows`. Points are
  // processed in fixed blocks whose partial sums are added in block order,
  // so serial and parallel execution agree bit for bit.
  void accumulate_gradient(const PointFeatures& f, const Eigen::MatrixXd& d_map, std::span<const std::size_t> rows,
                           const Eigen::MatrixXd& d_refiner, std::span<double> grad,
                           Execution exec = Execution::parallel) const;

  static constexpr std::size_t kBlock = 256;

 private:
  Eigen::MatrixXd standardized(const PointFeatures& f, std::span<const std::size_t> rows) const;
  Eigen::MatrixXd hidden(const Eigen::MatrixXd& x, std::vector<Eigen::MatrixXd>* acts) const;
  void backward_block(const Eigen::MatrixXd& x, const Eigen::MatrixXd* d_map, const Eigen::MatrixXd* d_ref,
                      std::span<double> grad) const;

  MlpConfig cfg_;
  std::vector<Layer> trunk_;
  Layer map_, refiner_;
  std::vector<double> params_;
};

}  // namespace multigrasp
