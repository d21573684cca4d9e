#include "multigrasp/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "multigrasp/error.hpp"

namespace multigrasp {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMat> weights(const std::vector<double>& p, const MlpModel::Layer& l) {
  return {p.data() + l.offset, l.out, l.in};
}
Eigen::Map<const Eigen::VectorXd> bias(const std::vector<double>& p, const MlpModel::Layer& l) {
  return {p.data() + l.offset + static_cast<std::size_t>(l.in) * static_cast<std::size_t>(l.out), l.out};
}
Eigen::Map<RowMat> weights(std::span<double> g, const MlpModel::Layer& l) { return {g.data() + l.offset, l.out, l.in}; }
Eigen::Map<Eigen::VectorXd> bias(std::span<double> g, const MlpModel::Layer& l) {
  return {g.data() + l.offset + static_cast<std::size_t>(l.in) * static_cast<std::size_t>(l.out), l.out};
}

}  // namespace

void validate(const MlpConfig& cfg) {
  if (cfg.hidden.empty()) throw Error("mlp: at least one hidden layer is required");
  for (int h : cfg.hidden) {
    if (h <= 0) throw Error("mlp: hidden sizes must be positive");
  }
  if (cfg.refiner && (cfg.views <= 0 || cfg.angle_bins <= 0 || cfg.depth_bins <= 0 || cfg.score_bins <= 0)) {
    throw Error("mlp: refiner head sizes must be positive");
  }
}

MlpModel::MlpModel(MlpConfig cfg) : cfg_(std::move(cfg)) {
  validate(cfg_);
  std::size_t offset = 0;
  int in = static_cast<int>(kFeatureCount);
  for (int h : cfg_.hidden) {
    trunk_.push_back({in, h, offset});
    offset += trunk_.back().size();
    in = h;
  }
  map_ = {in, kMapChannels, offset};
  offset += map_.size();
  if (cfg_.refiner) {
    refiner_ = {in, cfg_.refiner_outputs(), offset};
    offset += refiner_.size();
  } else {
    refiner_ = {in, 0, offset};
  }
  params_.assign(offset, 0.0);
}

MlpModel MlpModel::initialized(MlpConfig cfg, std::uint64_t seed) {
  MlpModel m(std::move(cfg));
  std::mt19937_64 rng(seed);
  auto fill = [&](const Layer& l) {
    if (l.out == 0) return;
    const double limit = std::sqrt(6.0 / (l.in + l.out));
    std::uniform_real_distribution<double> u(-limit, limit);
    for (std::size_t i = 0; i < static_cast<std::size_t>(l.in) * static_cast<std::size_t>(l.out); ++i) {
      m.params_[l.offset + i] = u(rng);
    }
  };
  for (const auto& l : m.trunk_) fill(l);
  return m;
}

std::vector<char> MlpModel::shared_mask() const {
  std::vector<char> mask(params_.size(), 0);
  for (const auto& l : trunk_) std::fill(mask.begin() + l.offset, mask.begin() + l.offset + l.size(), 1);
  const auto in = static_cast<std::size_t>(map_.in);
  const std::size_t row = map_.offset + kObjectness * in;
  std::fill(mask.begin() + row, mask.begin() + row + in, 1);
  mask[map_.offset + in * kMapChannels + kObjectness] = 1;
  return mask;
}

Eigen::MatrixXd MlpModel::standardized(const PointFeatures& f, std::span<const std::size_t> rows) const {
  const bool all = rows.empty();
  const std::size_t n = all ? f.rows : rows.size();
  Eigen::MatrixXd x(kFeatureCount, n);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t r = all ? c : rows[c];
    if (r >= f.rows) throw Error("mlp: feature row out of range");
    const auto v = f.row(r);
    for (std::size_t j = 0; j < kFeatureCount; ++j) x(j, c) = (v[j] - scaler.mean[j]) / scaler.scale[j];
  }
  return x;
}

Eigen::MatrixXd MlpModel::hidden(const Eigen::MatrixXd& x, std::vector<Eigen::MatrixXd>* acts) const {
  Eigen::MatrixXd a = x;
  if (acts) acts->push_back(a);
  for (const auto& l : trunk_) {
    Eigen::MatrixXd z = weights(params_, l) * a;
    z.colwise() += bias(params_, l);
    a = z.array().tanh().matrix();
    if (acts) acts->push_back(a);
  }
  return a;
}

Eigen::MatrixXd MlpModel::map_logits(const PointFeatures& f) const {
  if (f.values.size() != f.rows * kFeatureCount) throw Error("mlp: feature width mismatch");
  Eigen::MatrixXd out(kMapChannels, f.rows);
  for (std::size_t start = 0; start < f.rows; start += kBlock) {
    const std::size_t n = std::min(kBlock, f.rows - start);
    std::vector<std::size_t> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = start + i;
    const Eigen::MatrixXd h = hidden(standardized(f, rows), nullptr);
    Eigen::MatrixXd z = weights(params_, map_) * h;
    z.colwise() += bias(params_, map_);
    out.middleCols(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(n)) = z;
  }
  return out;
}

Eigen::MatrixXd MlpModel::refiner_outputs(const PointFeatures& f, std::span<const std::size_t> rows) const {
  if (!cfg_.refiner) throw Error("mlp: model has no refiner head");
  if (rows.empty()) return Eigen::MatrixXd(refiner_.out, 0);
  const Eigen::MatrixXd h = hidden(standardized(f, rows), nullptr);
  Eigen::MatrixXd z = weights(params_, refiner_) * h;
  z.colwise() += bias(params_, refiner_);
  return z;
}

void MlpModel::backward_block(const Eigen::MatrixXd& x, const Eigen::MatrixXd* d_map, const Eigen::MatrixXd* d_ref,
                              std::span<double> grad) const {
  std::vector<Eigen::MatrixXd> acts;
  const Eigen::MatrixXd h = hidden(x, &acts);
  Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(h.rows(), h.cols());
  auto head = [&](const Layer& l, const Eigen::MatrixXd& d) {
    weights(grad, l).noalias() += d * h.transpose();
    bias(grad, l).noalias() += d.rowwise().sum();
    delta.noalias() += weights(params_, l).transpose() * d;
  };
  if (d_map) head(map_, *d_map);
  if (d_ref) head(refiner_, *d_ref);
  for (std::size_t k = trunk_.size(); k-- > 0;) {
    const Eigen::MatrixXd& a = acts[k + 1];
    const Eigen::MatrixXd dz = (delta.array() * (1.0 - a.array().square())).matrix();
    weights(grad, trunk_[k]).noalias() += dz * acts[k].transpose();
    bias(grad, trunk_[k]).noalias() += dz.rowwise().sum();
    if (k > 0) delta = weights(params_, trunk_[k]).transpose() * dz;
  }
}

void MlpModel::accumulate_gradient(const PointFeatures& f, const Eigen::MatrixXd& d_map,
                                   std::span<const std::size_t> rows, const Eigen::MatrixXd& d_refiner,
                                   std::span<double> grad, Execution exec) const {
  if (grad.size() != params_.size()) throw Error("mlp: gradient length mismatch");
  if (d_map.size() != 0 && (d_map.rows() != kMapChannels || static_cast<std::size_t>(d_map.cols()) != f.rows)) {
    throw Error("mlp: map gradient shape mismatch");
  }
  const bool with_ref = !rows.empty();
  if (with_ref && (!cfg_.refiner || d_refiner.rows() != refiner_.out ||
                   static_cast<std::size_t>(d_refiner.cols()) != rows.size())) {
    throw Error("mlp: refiner gradient shape mismatch");
  }

  const std::size_t map_blocks = d_map.size() == 0 ? 0 : (f.rows + kBlock - 1) / kBlock;
  const std::size_t blocks = map_blocks + (with_ref ? 1 : 0);
  std::vector<std::vector<double>> partial(blocks);
  auto run = [&](std::size_t b) {
    partial[b].assign(params_.size(), 0.0);
    if (b < map_blocks) {
      const std::size_t start = b * kBlock, n = std::min(kBlock, f.rows - start);
      std::vector<std::size_t> idx(n);
      for (std::size_t i = 0; i < n; ++i) idx[i] = start + i;
      const Eigen::MatrixXd d = d_map.middleCols(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(n));
      backward_block(standardized(f, idx), &d, nullptr, partial[b]);
    } else {
      backward_block(standardized(f, rows), nullptr, &d_refiner, partial[b]);
    }
  };

  if (exec == Execution::serial) {
    for (std::size_t b = 0; b < blocks; ++b) run(b);
  } else {
    const auto nb = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t b = 0; b < nb; ++b) run(static_cast<std::size_t>(b));
  }
  for (const auto& p : partial) {
    for (std::size_t i = 0; i < p.size(); ++i) grad[i] += p[i];
  }
}

}  // namespace multigrasp
