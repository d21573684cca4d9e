#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "multigrasp/point_cloud.hpp"

namespace multigrasp {

using PointIndex = std::uint32_t;

inline double squared_distance(const Point3& a, const Point3& b) {
  const double dx = a.x() - b.x();
  const double dy = a.y() - b.y();
  const double dz = a.z() - b.z();
  return dx * dx + dy * dy + dz * dz;
}

// Static k-d tree over a copy of the cloud's points.
//
// Results are exactly those of a brute-force scan using squared Euclidean
// distances computed as dx*dx + dy*dy + dz*dz: knn sorts by (distance, index),
// radius queries return ascending indices. Immutable after construction, so
// concurrent queries are safe.
class KdTree {
 public:
  explicit KdTree(const PointCloud& cloud);
  explicit KdTree(std::vector<Point3> points);

  std::size_t size() const { return points_.size(); }
  const std::vector<Point3>& points() const { return points_; }

  std::vector<PointIndex> knn(const Point3& query, std::size_t k) const;
  // Single nearest neighbour; ties resolve to the lowest index.
  PointIndex nearest(const Point3& query) const;
  std::vector<PointIndex> radius_query(const Point3& query, double r) const;

  // True as soon as `pred(index)` holds for some point within r of the
  // query. Visit order is unspecified; nothing is allocated.
  template <class Pred>
  bool any_within(const Point3& query, double r, Pred&& pred) const;

 private:
  struct Node {
    // Leaf when dim < 0: items [begin, end) of order_.
    int dim = -1;
    double split = 0.0;
    std::uint32_t begin = 0, end = 0;
    std::int32_t left = -1, right = -1;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);

  std::vector<Point3> points_;
  std::vector<PointIndex> order_;
  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
};

template <class Pred>
bool KdTree::any_within(const Point3& query, double r, Pred&& pred) const {
  if (root_ < 0) return false;
  const double r2 = r * r;
  auto visit = [&](auto&& self, std::int32_t node_id) -> bool {
    const Node& node = nodes_[static_cast<std::size_t>(node_id)];
    if (node.dim < 0) {
      for (std::uint32_t i = node.begin; i < node.end; ++i) {
        const PointIndex j = order_[i];
        if (squared_distance(query, points_[j]) <= r2 && pred(j)) return true;
      }
      return false;
    }
    const double diff = query[node.dim] - node.split;
    if (self(self, diff < 0.0 ? node.left : node.right)) return true;
    return diff * diff <= r2 && self(self, diff < 0.0 ? node.right : node.left);
  };
  return visit(visit, root_);
}

using SpatialIndex = KdTree;

SpatialIndex build_index(const PointCloud& cloud);


}  // namespace multigrasp
