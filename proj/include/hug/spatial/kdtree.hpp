#pragma once

#include <Eigen/Core>
#include <vector>

namespace hug::spatial {

/// Static 3D kd-tree (median split) for exact nearest-neighbour queries.
/// Exact: the same distance arithmetic as a linear scan, pruning only on
/// provably farther subtrees, so results match brute force bit-for-bit
/// (ties broken toward the smaller point index).
class KdTree {
public:
  KdTree() = default;
  explicit KdTree(const std::vector<Eigen::Vector3d>& points) { build(points); }

  void build(const std::vector<Eigen::Vector3d>& points);
  bool empty() const { return nodes_.empty(); }
  std::size_t size() const { return points_.size(); }

  struct Hit {
    int index = -1;
    double squared_distance = 0.0;
  };

  /// Nearest point to `query`. Throws InputError on an empty tree.
  Hit nearest(const Eigen::Vector3d& query) const;

  /// True when some point lies within `radius` of `query` (exact).
  bool any_within(const Eigen::Vector3d& query, double radius) const;

private:
  struct Node {
    int axis = -1;       // -1 marks a leaf
    double split = 0.0;  // splitting coordinate
    int left = -1, right = -1;
    int begin = 0, end = 0;  // leaf: range into order_
  };

  int build_range(int begin, int end);
  void search(int node, const Eigen::Vector3d& query, Hit& best) const;
  bool search_within(int node, const Eigen::Vector3d& query, double r2) const;

  std::vector<Eigen::Vector3d> points_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace hug::spatial
