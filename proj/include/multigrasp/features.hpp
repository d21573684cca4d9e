#pragma once

#include <span>
#include <vector>

#include "multigrasp/point_cloud.hpp"
#include "multigrasp/spatial_index.hpp"

namespace multigrasp {

// Per-point descriptor, one row per point:
//   0      height above the table
//   1..3   covariance normal (toward the viewpoint; the unit direction to the
//          viewpoint when the neighbourhood is degenerate)
//   4      curvature (smallest eigenvalue / eigenvalue sum)
//   5      neighbour count within the radius
//   6      distance to the cloud centroid
constexpr std::size_t kFeatureCount = 7;

struct PointFeatures {
  std::size_t rows = 0;
  std::vector<double> values;  // row-major, rows x kFeatureCount

  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * kFeatureCount, kFeatureCount};
  }
};

enum class Execution { serial, parallel };

PointFeatures compute_features(const PointCloud& cloud, const KdTree& index, double table_height,
                               double radius = 0.01, Execution exec = Execution::parallel);

// Column-wise standardization fitted on training data. Columns with zero
// spread keep scale 1.
struct FeatureScaler {
  std::vector<double> mean = std::vector<double>(kFeatureCount, 0.0);
  std::vector<double> scale = std::vector<double>(kFeatureCount, 1.0);

  static FeatureScaler fit(std::span<const PointFeatures* const> sets);
  void apply(PointFeatures& f) const;
};

}  // namespace multigrasp
