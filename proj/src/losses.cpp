#include "multigrasp/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "multigrasp/error.hpp"

namespace multigrasp {

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void check_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw Error(std::string(what) + ": length mismatch");
}

// Weighted BCE: pos_w * y * softplus(-z) + (1 - y) * softplus(z), averaged.
LossGrad weighted_bce(std::span<const double> z, std::span<const double> y, double pos_w) {
  LossGrad out;
  out.grad.resize(z.size());
  if (z.empty()) return out;
  const double inv = 1.0 / static_cast<double>(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    out.value += pos_w * y[i] * softplus(-z[i]) + (1.0 - y[i]) * softplus(z[i]);
    const double s = sigmoid(z[i]);
    out.grad[i] = inv * (pos_w * y[i] * (s - 1.0) + (1.0 - y[i]) * s);
  }
  out.value *= inv;
  return out;
}

}  // namespace

LossGrad loss_objectness(std::span<const double> logits, std::span<const double> labels) {
  check_lengths(logits.size(), labels.size(), "loss_objectness");
  return weighted_bce(logits, labels, 1.0);
}

LossGrad loss_vacuum(std::span<const double> logits, std::span<const double> targets) {
  check_lengths(logits.size(), targets.size(), "loss_vacuum");
  return weighted_bce(logits, targets, 1.0);
}

LossGrad loss_parallel_graspness(std::span<const double> logits, std::span<const double> labels,
                                 double positive_weight) {
  check_lengths(logits.size(), labels.size(), "loss_parallel_graspness");
  std::vector<double> binary(labels.size());
  std::transform(labels.begin(), labels.end(), binary.begin(), [](double v) { return v > 0.0 ? 1.0 : 0.0; });
  return weighted_bce(logits, binary, positive_weight);
}

LossGrad smooth_l1(std::span<const double> pred, std::span<const double> target, double beta) {
  check_lengths(pred.size(), target.size(), "smooth_l1");
  if (!(beta > 0.0)) throw Error("smooth_l1: beta must be positive");
  LossGrad out;
  out.grad.resize(pred.size());
  if (pred.empty()) return out;
  const double inv = 1.0 / static_cast<double>(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double r = pred[i] - target[i];
    if (std::abs(r) < beta) {
      out.value += 0.5 * r * r / beta;
      out.grad[i] = inv * r / beta;
    } else {
      out.value += std::abs(r) - 0.5 * beta;
      out.grad[i] = inv * (r > 0.0 ? 1.0 : -1.0);
    }
  }
  out.value *= inv;
  return out;
}

LossGrad cross_entropy(std::span<const double> logits, int target) {
  if (logits.empty() || target < 0 || static_cast<std::size_t>(target) >= logits.size()) {
    throw Error("cross_entropy: target class out of range");
  }
  const double m = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - m);
  const double lse = m + std::log(sum);
  LossGrad out;
  out.value = lse - logits[static_cast<std::size_t>(target)];
  out.grad.resize(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) out.grad[i] = std::exp(logits[i] - lse);
  out.grad[static_cast<std::size_t>(target)] -= 1.0;
  return out;
}

LossGrad loss_refiner(std::span<const double> outputs, const RefinerTarget& target, int views, int angle_bins,
                      int depth_bins, int score_bins, const RefinerWeights& w) {
  const auto V = static_cast<std::size_t>(views), A = static_cast<std::size_t>(angle_bins),
             D = static_cast<std::size_t>(depth_bins), S = static_cast<std::size_t>(score_bins);
  check_lengths(outputs.size(), V + A + D + 1 + S, "loss_refiner");
  check_lengths(target.view_scores.size(), V, "loss_refiner view targets");

  LossGrad out;
  out.grad.assign(outputs.size(), 0.0);
  auto add = [&](std::size_t offset, const LossGrad& part, double weight) {
    out.value += weight * part.value;
    for (std::size_t i = 0; i < part.grad.size(); ++i) out.grad[offset + i] += weight * part.grad[i];
  };
  add(0, smooth_l1(outputs.subspan(0, V), target.view_scores), w.view);
  add(V, cross_entropy(outputs.subspan(V, A), target.angle_bin), w.angle);
  add(V + A, cross_entropy(outputs.subspan(V + A, D), target.depth_bin), w.depth);
  const double wt = target.width;
  add(V + A + D, smooth_l1(outputs.subspan(V + A + D, 1), std::span<const double>(&wt, 1)), w.width);
  add(V + A + D + 1, cross_entropy(outputs.subspan(V + A + D + 1, S), target.score_bin), w.score);
  return out;
}

}  // namespace multigrasp
