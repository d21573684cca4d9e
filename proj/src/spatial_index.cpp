#include "multigrasp/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>

#include "multigrasp/error.hpp"

namespace multigrasp {

namespace {

constexpr std::uint32_t kLeafSize = 12;

struct Candidate {
  double d2;
  PointIndex index;
  bool operator<(const Candidate& o) const {
    return d2 < o.d2 || (d2 == o.d2 && index < o.index);
  }
};

}  // namespace

void validate(const PointCloud& cloud) {
  if (cloud.empty()) throw Error("point cloud is empty");
  if (!all_finite(cloud.viewpoint)) throw Error("viewpoint is not finite");
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (!all_finite(cloud.points[i])) throw Error("point " + std::to_string(i) + " is not finite");
  }
}

Point3 centroid(const std::vector<Point3>& points) {
  Point3 c = Point3::Zero();
  for (const auto& p : points) c += p;
  return points.empty() ? c : Point3(c / static_cast<double>(points.size()));
}

KdTree::KdTree(const PointCloud& cloud) : KdTree(cloud.points) {}

KdTree::KdTree(std::vector<Point3> points) : points_(std::move(points)) {
  if (points_.empty()) throw Error("cannot build spatial index over an empty cloud");
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), PointIndex{0});
  nodes_.reserve(2 * points_.size() / kLeafSize + 2);
  root_ = build(0, static_cast<std::uint32_t>(order_.size()));
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{-1, 0.0, begin, end, -1, -1});
  if (end - begin <= kLeafSize) return id;

  Eigen::Vector3d lo = points_[order_[begin]], hi = lo;
  for (std::uint32_t i = begin + 1; i < end; ++i) {
    lo = lo.cwiseMin(points_[order_[i]]);
    hi = hi.cwiseMax(points_[order_[i]]);
  }
  int dim = 0;
  (hi - lo).maxCoeff(&dim);
  if (hi[dim] == lo[dim]) return id;  // all points coincide

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](PointIndex a, PointIndex b) { return points_[a][dim] < points_[b][dim]; });
  const double split = points_[order_[mid]][dim];
  const std::int32_t left = build(begin, mid);
  const std::int32_t right = build(mid, end);
  Node& node = nodes_[static_cast<std::size_t>(id)];
  node.dim = dim;
  node.split = split;
  node.left = left;
  node.right = right;
  return id;
}

std::vector<PointIndex> KdTree::knn(const Point3& query, std::size_t k) const {
  if (k == 0 || k > points_.size()) {
    throw Error("knn: k=" + std::to_string(k) + " outside [1, " + std::to_string(points_.size()) + "]");
  }
  std::priority_queue<Candidate> heap;  // max-heap on (d2, index)

  auto visit = [&](auto&& self, std::int32_t node_id) -> void {
    const Node& node = nodes_[static_cast<std::size_t>(node_id)];
    if (node.dim < 0) {
      for (std::uint32_t i = node.begin; i < node.end; ++i) {
        const Candidate c{squared_distance(query, points_[order_[i]]), order_[i]};
        if (heap.size() < k) {
          heap.push(c);
        } else if (c < heap.top()) {
          heap.pop();
          heap.push(c);
        }
      }
      return;
    }
    const double diff = query[node.dim] - node.split;
    const std::int32_t near = diff < 0.0 ? node.left : node.right;
    const std::int32_t far = diff < 0.0 ? node.right : node.left;
    self(self, near);
    // <= keeps equidistant candidates with lower indices reachable.
    if (heap.size() < k || diff * diff <= heap.top().d2) self(self, far);
  };
  visit(visit, root_);

  std::vector<PointIndex> out(heap.size());
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = heap.top().index;
    heap.pop();
  }
  return out;
}

PointIndex KdTree::nearest(const Point3& query) const {
  Candidate best{std::numeric_limits<double>::infinity(), 0};
  auto visit = [&](auto&& self, std::int32_t node_id) -> void {
    const Node& node = nodes_[static_cast<std::size_t>(node_id)];
    if (node.dim < 0) {
      for (std::uint32_t i = node.begin; i < node.end; ++i) {
        const Candidate c{squared_distance(query, points_[order_[i]]), order_[i]};
        if (c < best) best = c;
      }
      return;
    }
    const double diff = query[node.dim] - node.split;
    self(self, diff < 0.0 ? node.left : node.right);
    if (diff * diff <= best.d2) self(self, diff < 0.0 ? node.right : node.left);
  };
  visit(visit, root_);
  return best.index;
}

std::vector<PointIndex> KdTree::radius_query(const Point3& query, double r) const {
  if (!(r > 0.0)) throw Error("radius_query: radius must be positive");
  const double r2 = r * r;
  std::vector<PointIndex> out;
  auto visit = [&](auto&& self, std::int32_t node_id) -> void {
    const Node& node = nodes_[static_cast<std::size_t>(node_id)];
    if (node.dim < 0) {
      for (std::uint32_t i = node.begin; i < node.end; ++i) {
        if (squared_distance(query, points_[order_[i]]) <= r2) out.push_back(order_[i]);
      }
      return;
    }
    const double diff = query[node.dim] - node.split;
    self(self, diff < 0.0 ? node.left : node.right);
    if (diff * diff <= r2) self(self, diff < 0.0 ? node.right : node.left);
  };
  visit(visit, root_);
  std::sort(out.begin(), out.end());
  return out;
}

SpatialIndex build_index(const PointCloud& cloud) {
  validate(cloud);
  return KdTree(cloud);
}

}  // namespace multigrasp
