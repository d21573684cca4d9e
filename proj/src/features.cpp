#include "multigrasp/features.hpp"

#include <cmath>

#include "multigrasp/error.hpp"
#include "multigrasp/kernels.hpp"
#include "multigrasp/normals.hpp"

namespace multigrasp {

PointFeatures compute_features(const PointCloud& cloud, const KdTree& index, double table_height, double radius,
                               Execution exec) {
  validate(cloud);
  if (index.size() != cloud.size()) throw Error("compute_features: index does not match the cloud");
  std::vector<kernels::NeighborhoodStats> stats(cloud.size());
  if (exec == Execution::serial) {
    kernels::serial::neighborhood_batch(index, cloud.points, radius, stats);
  } else {
    kernels::parallel::neighborhood_batch(index, cloud.points, radius, stats);
  }

  const Point3 c = centroid(cloud.points);
  PointFeatures f;
  f.rows = cloud.size();
  f.values.resize(f.rows * kFeatureCount);
  for (std::size_t i = 0; i < f.rows; ++i) {
    const Point3& p = cloud.points[i];
    Vec3 n;
    double curvature = 0.0;
    try {
      const LocalSurface s = fit_local_surface(stats[i], p, cloud.viewpoint);
      n = s.normal.vec();
      curvature = s.curvature;
    } catch (const DegenerateNeighborhood&) {
      const Vec3 to_view = cloud.viewpoint - p;
      n = to_view.norm() > 0.0 ? Vec3(to_view.normalized()) : Vec3::UnitZ();
    }
    double* row = f.values.data() + i * kFeatureCount;
    row[0] = p.z() - table_height;
    row[1] = n.x();
    row[2] = n.y();
    row[3] = n.z();
    row[4] = curvature;
    row[5] = static_cast<double>(stats[i].count);
    row[6] = (p - c).norm();
  }
  return f;
}

FeatureScaler FeatureScaler::fit(std::span<const PointFeatures* const> sets) {
  FeatureScaler s;
  std::vector<double> sum(kFeatureCount, 0.0), sq(kFeatureCount, 0.0);
  double n = 0.0;
  for (const auto* f : sets) {
    for (std::size_t i = 0; i < f->rows; ++i) {
      const auto r = f->row(i);
      for (std::size_t j = 0; j < kFeatureCount; ++j) sum[j] += r[j];
    }
    n += static_cast<double>(f->rows);
  }
  if (n == 0.0) throw Error("FeatureScaler::fit: no rows");
  for (std::size_t j = 0; j < kFeatureCount; ++j) s.mean[j] = sum[j] / n;
  for (const auto* f : sets) {
    for (std::size_t i = 0; i < f->rows; ++i) {
      const auto r = f->row(i);
      for (std::size_t j = 0; j < kFeatureCount; ++j) sq[j] += (r[j] - s.mean[j]) * (r[j] - s.mean[j]);
    }
  }
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    const double sd = std::sqrt(sq[j] / n);
    s.scale[j] = sd > 1e-12 ? sd : 1.0;
  }
  return s;
}

void FeatureScaler::apply(PointFeatures& f) const {
  for (std::size_t i = 0; i < f.rows; ++i) {
    double* row = f.values.data() + i * kFeatureCount;
    for (std::size_t j = 0; j < kFeatureCount; ++j) row[j] = (row[j] - mean[j]) / scale[j];
  }
}

}  // namespace multigrasp
