#include "hug/spatial/kdtree.hpp"

#include <algorithm>
#include <numeric>

#include "hug/core/errors.hpp"

namespace hug::spatial {

namespace {
constexpr int kLeafSize = 8;
}

void KdTree::build(const std::vector<Eigen::Vector3d>& points) {
  points_ = points;
  order_.resize(points.size());
  std::iota(order_.begin(), order_.end(), 0);
  nodes_.clear();
  nodes_.reserve(points.size() / kLeafSize * 2 + 2);
  root_ = points.empty() ? -1 : build_range(0, static_cast<int>(points.size()));
}

int KdTree::build_range(int begin, int end) {
  int id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  if (end - begin <= kLeafSize) {
    nodes_[id].begin = begin;
    nodes_[id].end = end;
    return id;
  }
  Eigen::Vector3d lo = points_[order_[begin]], hi = lo;
  for (int i = begin + 1; i < end; ++i) {
    lo = lo.cwiseMin(points_[order_[i]]);
    hi = hi.cwiseMax(points_[order_[i]]);
  }
  int axis;
  (hi - lo).maxCoeff(&axis);
  int mid = (begin + end) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](int a, int b) { return points_[a][axis] < points_[b][axis]; });
  int node_axis = axis;
  double split = points_[order_[mid]][node_axis];
  int left = build_range(begin, mid);
  int right = build_range(mid, end);
  nodes_[id].axis = node_axis;
  nodes_[id].split = split;
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void KdTree::search(int node, const Eigen::Vector3d& query, Hit& best) const {
  const Node& n = nodes_[node];
  if (n.axis < 0) {
    for (int i = n.begin; i < n.end; ++i) {
      int idx = order_[i];
      double d2 = (points_[idx] - query).squaredNorm();
      if (d2 < best.squared_distance || (d2 == best.squared_distance && idx < best.index)) {
        best.squared_distance = d2;
        best.index = idx;
      }
    }
    return;
  }
  double delta = query[n.axis] - n.split;
  int near = delta < 0.0 ? n.left : n.right;
  int far = delta < 0.0 ? n.right : n.left;
  search(near, query, best);
  if (delta * delta <= best.squared_distance) search(far, query, best);
}

KdTree::Hit KdTree::nearest(const Eigen::Vector3d& query) const {
  if (root_ < 0) throw InputError("KdTree: nearest on empty tree");
  Hit best;
  best.squared_distance = std::numeric_limits<double>::infinity();
  search(root_, query, best);
  return best;
}

bool KdTree::search_within(int node, const Eigen::Vector3d& query, double r2) const {
  const Node& n = nodes_[node];
  if (n.axis < 0) {
    for (int i = n.begin; i < n.end; ++i)
      if ((points_[order_[i]] - query).squaredNorm() <= r2) return true;
    return false;
  }
  double delta = query[n.axis] - n.split;
  int near = delta < 0.0 ? n.left : n.right;
  int far = delta < 0.0 ? n.right : n.left;
  if (search_within(near, query, r2)) return true;
  if (delta * delta <= r2) return search_within(far, query, r2);
  return false;
}

bool KdTree::any_within(const Eigen::Vector3d& query, double radius) const {
  if (root_ < 0) return false;
  return search_within(root_, query, radius * radius);
}

}  // namespace hug::spatial
