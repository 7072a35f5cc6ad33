#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace hug::spatial {

/// Closest point on triangle abc to p (Ericson's region walk). Barycentrics
/// satisfy q = w0 a + w1 b + w2 c, w >= 0, sum 1.
struct TrianglePoint {
  Eigen::Vector3d point = Eigen::Vector3d::Zero();
  Eigen::Vector3d bary = Eigen::Vector3d::Zero();
};

TrianglePoint closest_point_triangle(const Eigen::Vector3d& p, const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                                     const Eigen::Vector3d& c);

/// AABB tree over a triangle set for exact point-to-surface queries. Exact:
/// leaves run the same closest_point_triangle arithmetic as a linear scan and
/// subtrees are pruned only when their box is provably farther than the
/// current best, so results match brute force bit-for-bit (ties broken toward
/// the smaller triangle index).
class TriangleBvh {
public:
  TriangleBvh() = default;
  TriangleBvh(const std::vector<Eigen::Vector3d>& vertices, const std::vector<Eigen::Vector3i>& faces) {
    build(vertices, faces);
  }

  void build(const std::vector<Eigen::Vector3d>& vertices, const std::vector<Eigen::Vector3i>& faces);
  bool empty() const { return faces_.empty(); }

  struct Hit {
    int face = -1;  // index into the face array passed to build
    double squared_distance = 0.0;
    Eigen::Vector3d point = Eigen::Vector3d::Zero();
    Eigen::Vector3d bary = Eigen::Vector3d::Zero();
  };

  /// Closest surface point to `query`. Throws InputError on an empty tree.
  Hit closest(const Eigen::Vector3d& query) const;

  const std::vector<Eigen::Vector3i>& faces() const { return faces_; }
  const std::vector<Eigen::Vector3d>& vertices() const { return vertices_; }

private:
  struct Node {
    Eigen::Vector3d lo, hi;
    int left = -1, right = -1;
    int begin = 0, end = 0;  // leaf range into order_ when left < 0
  };

  int build_range(int begin, int end);
  void search(int node, const Eigen::Vector3d& query, Hit& best) const;
  double box_distance2(const Node& n, const Eigen::Vector3d& q) const;

  std::vector<Eigen::Vector3d> vertices_;
  std::vector<Eigen::Vector3i> faces_;
  std::vector<Eigen::Vector3d> centroids_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

/// A triangle surface prepared for signed distance queries. The sign uses
/// angle-weighted pseudo-normals at the closest feature (face, edge or
/// vertex), which classifies inside/outside correctly for watertight,
/// consistently wound surfaces and degrades gracefully otherwise.
class SignedSurface {
public:
  SignedSurface() = default;
  SignedSurface(const std::vector<Eigen::Vector3d>& vertices, const std::vector<Eigen::Vector3i>& faces) {
    build(vertices, faces);
  }

  void build(const std::vector<Eigen::Vector3d>& vertices, const std::vector<Eigen::Vector3i>& faces);
  bool empty() const { return bvh_.empty(); }

  struct Result {
    double signed_distance = 0.0;  // negative inside
    int face = -1;
    Eigen::Vector3d point = Eigen::Vector3d::Zero();  // closest surface point
    Eigen::Vector3d bary = Eigen::Vector3d::Zero();
  };

  Result query(const Eigen::Vector3d& p) const;
  const TriangleBvh& bvh() const { return bvh_; }

private:
  Eigen::Vector3d pseudo_normal(int face, const Eigen::Vector3d& bary) const;

  TriangleBvh bvh_;
  std::vector<Eigen::Vector3d> face_normals_;
  std::vector<Eigen::Vector3d> vertex_normals_;                 // angle-weighted
  std::vector<std::pair<std::uint64_t, Eigen::Vector3d>> edge_normals_;  // sorted by key

  Eigen::Vector3d edge_normal(int va, int vb) const;
};

}  // namespace hug::spatial
