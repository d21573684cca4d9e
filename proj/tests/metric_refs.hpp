#pragma once

// Nested-loop metric references and scripted clearing traces with their
// hand-computed outcomes.

#include <vector>

#include "multigrasp/evaluation.hpp"

namespace metric_ref {

using multigrasp::Attempt;
using multigrasp::ClearingTrace;
using multigrasp::Gripper;

inline double precision(const std::vector<double>& c, Gripper g, double mu, std::size_t k) {
  std::size_t n = 0, hits = 0;
  for (std::size_t i = 0; i < c.size() && i < k; ++i) {
    ++n;
    const bool ok = g == Gripper::parallel ? c[i] <= mu : c[i] >= mu;
    if (ok) ++hits;
  }
  return n == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(n);
}

inline double ap(const std::vector<double>& c, Gripper g, double mu, int k_max) {
  double sum = 0.0;
  for (int k = 1; k <= k_max; ++k) sum += precision(c, g, mu, static_cast<std::size_t>(k));
  return sum / k_max;
}

inline double ap_all(const std::vector<double>& c, Gripper g, const std::vector<double>& grid, int k_max) {
  double sum = 0.0;
  for (double mu : grid) sum += ap(c, g, mu, k_max);
  return sum / static_cast<double>(grid.size());
}

struct ScriptedTrace {
  const char* name;
  ClearingTrace trace;
  double r_object, r_grasp, r_mix, r_seen;
};

inline Attempt hit(int id) { return {id, true, Gripper::parallel}; }
inline Attempt miss(int id) { return {id, false, Gripper::vacuum}; }

inline std::vector<ScriptedTrace> scripted_traces() {
  return {
      {"six clean picks",
       {{1, 2, 3, 4, 5, 6}, {hit(1), hit(2), hit(3), hit(4), hit(5), hit(6)}, {1, 2, 3, 4, 5, 6}},
       1.0, 1.0, 1.0, 1.0},
      {"two retries",
       {{1, 2, 3, 4, 5, 6}, {miss(1), hit(1), miss(2), hit(2), hit(3), hit(4), hit(5), hit(6)}, {1, 2, 3, 4, 5, 6}},
       1.0, 6.0 / 8.0, 8.0 / 6.0, 1.0},
      {"stuck on one object",
       {{1, 2, 3, 4}, {hit(1), miss(2), miss(2), miss(2)}, {1, 2}},
       1.0 / 4.0, 1.0 / 4.0, 1.0, 2.0 / 4.0},
      {"nothing proposed", {{1, 2, 3}, {}, {}}, 0.0, 0.0, 0.0, 0.0},
      {"misses on the table",
       {{1, 2, 3, 4, 5}, {miss(0), hit(1), miss(2), hit(2), hit(3), miss(0), miss(4), miss(4)}, {1, 2, 3, 4, 5}},
       3.0 / 5.0, 3.0 / 8.0, 4.0 / 3.0, 1.0},
  };
}

}  // namespace metric_ref
