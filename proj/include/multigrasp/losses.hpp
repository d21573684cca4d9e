#pragma once

#include <span>
#include <vector>

namespace multigrasp {

// Scalar loss with its gradient with respect to the inputs it was given.
struct LossGrad {
  double value = 0.0;
  std::vector<double> grad;
};

// Mean two-class cross-entropy on sigmoid logits; labels in {0, 1}.
LossGrad loss_objectness(std::span<const double> logits, std::span<const double> labels);

// Mean binary cross-entropy with soft targets in [0, 1].
LossGrad loss_vacuum(std::span<const double> logits, std::span<const double> targets);

// Mean binary cross-entropy on labels binarized at > 0, with the positive
// term scaled by positive_weight.
LossGrad loss_parallel_graspness(std::span<const double> logits, std::span<const double> labels,
                                 double positive_weight = 10.0);

// Mean over elements of 0.5 r^2 / beta for |r| < beta, |r| - 0.5 beta else.
LossGrad smooth_l1(std::span<const double> pred, std::span<const double> target, double beta = 1.0);

// Softmax cross-entropy of one sample against a class index.
LossGrad cross_entropy(std::span<const double> logits, int target);

// Supervision for one refiner sample (a seed point and its best view).
struct RefinerTarget {
  std::vector<double> view_scores;  // one per view
  int angle_bin = 0;
  int depth_bin = 0;
  double width = 0.0;  // in the width head's output units
  int score_bin = 0;
};

struct RefinerWeights {
  double view = 1.0, width = 1.0, angle = 1.0, depth = 1.0, score = 1.0;
};

// Weighted sum of Smooth-L1 (view scores), Smooth-L1 (width), and
// cross-entropy (angle, depth, score) for one sample. `outputs` follows the
// refiner row layout [views | angles | depths | width | scores].
LossGrad loss_refiner(std::span<const double> outputs, const RefinerTarget& target, int views, int angle_bins,
                      int depth_bins, int score_bins, const RefinerWeights& w = {});

}  // namespace multigrasp
