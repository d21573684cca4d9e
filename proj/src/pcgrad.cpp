#include "multigrasp/pcgrad.hpp"

#include <algorithm>
#include <numeric>

#include "multigrasp/error.hpp"

namespace multigrasp {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void check(const GradientSet& grads) {
  if (grads.size() < 2) throw Error("pcgrad: at least two task gradients are required");
  for (const auto& g : grads) {
    if (g.size() != grads.front().size()) throw Error("pcgrad: task gradients differ in length");
  }
}

}  // namespace

std::vector<double> pcgrad(const GradientSet& grads, const std::vector<std::vector<std::size_t>>& orders) {
  check(grads);
  if (orders.size() != grads.size()) throw Error("pcgrad: one order per task is required");
  const std::size_t n = grads.front().size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < grads.size(); ++i) {
    std::vector<double> g = grads[i];
    for (std::size_t j : orders[i]) {
      if (j == i || j >= grads.size()) throw Error("pcgrad: invalid task order");
      const double d = dot(g, grads[j]);
      if (d >= 0.0) continue;
      const double nn = dot(grads[j], grads[j]);
      if (nn == 0.0) continue;
      const double c = d / nn;
      for (std::size_t k = 0; k < n; ++k) g[k] -= c * grads[j][k];
    }
    for (std::size_t k = 0; k < n; ++k) out[k] += g[k];
  }
  const double inv = 1.0 / static_cast<double>(grads.size());
  for (double& v : out) v *= inv;
  return out;
}

std::vector<double> pcgrad(const GradientSet& grads, std::mt19937_64& rng) {
  check(grads);
  std::vector<std::vector<std::size_t>> orders(grads.size());
  for (std::size_t i = 0; i < grads.size(); ++i) {
    for (std::size_t j = 0; j < grads.size(); ++j) {
      if (j != i) orders[i].push_back(j);
    }
    std::shuffle(orders[i].begin(), orders[i].end(), rng);
  }
  return pcgrad(grads, orders);
}

}  // namespace multigrasp
