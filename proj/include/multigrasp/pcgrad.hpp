#pragma once

#include <random>
#include <vector>

namespace multigrasp {

// Per-task gradients over the same parameter vector.
using GradientSet = std::vector<std::vector<double>>;

// Gradient surgery. Each task gradient g_i visits the other tasks j in the
// given order; when g_i . g_j < 0 (g_j the original, unprojected gradient)
// g_i loses its component along g_j. Pairs where g_j has zero norm are
// skipped. Returns the mean of the projected gradients.
// orders[i] lists the other task indices for task i.
std::vector<double> pcgrad(const GradientSet& grads, const std::vector<std::vector<std::size_t>>& orders);

// Same with every task's order drawn by shuffling from `rng`.
std::vector<double> pcgrad(const GradientSet& grads, std::mt19937_64& rng);

}  // namespace multigrasp
