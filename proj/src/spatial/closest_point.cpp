#include "hug/spatial/closest_point.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hug/core/errors.hpp"

namespace hug::spatial {

TrianglePoint closest_point_triangle(const Eigen::Vector3d& p, const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                                     const Eigen::Vector3d& c) {
  // Ericson, Real-Time Collision Detection, 5.1.5
  Eigen::Vector3d ab = b - a, ac = c - a, ap = p - a;
  double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return {a, {1, 0, 0}};

  Eigen::Vector3d bp = p - b;
  double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return {b, {0, 1, 0}};

  double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    double v = d1 / (d1 - d3);
    return {a + v * ab, {1.0 - v, v, 0}};
  }

  Eigen::Vector3d cp = p - c;
  double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return {c, {0, 0, 1}};

  double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    double w = d2 / (d2 - d6);
    return {a + w * ac, {1.0 - w, 0, w}};
  }

  double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return {b + w * (c - b), {0, 1.0 - w, w}};
  }

  double denom = va + vb + vc;
  if (denom <= 0.0) {
    // degenerate triangle: fall back to the nearest of the three edges
    TrianglePoint best{a, {1, 0, 0}};
    double best_d2 = (p - a).squaredNorm();
    auto consider = [&](const TrianglePoint& tp) {
      double d2s = (p - tp.point).squaredNorm();
      if (d2s < best_d2) {
        best_d2 = d2s;
        best = tp;
      }
    };
    auto on_segment = [&](const Eigen::Vector3d& s, const Eigen::Vector3d& e, int i0, int i1) {
      Eigen::Vector3d se = e - s;
      double len2 = se.squaredNorm();
      double t = len2 > 0.0 ? std::clamp((p - s).dot(se) / len2, 0.0, 1.0) : 0.0;
      TrianglePoint tp;
      tp.point = s + t * se;
      tp.bary.setZero();
      tp.bary[i0] = 1.0 - t;
      tp.bary[i1] = t;
      return tp;
    };
    consider(on_segment(a, b, 0, 1));
    consider(on_segment(b, c, 1, 2));
    consider(on_segment(a, c, 0, 2));
    return best;
  }
  double v = vb / denom, w = vc / denom;
  return {a + ab * v + ac * w, {1.0 - v - w, v, w}};
}

void TriangleBvh::build(const std::vector<Eigen::Vector3d>& vertices, const std::vector<Eigen::Vector3i>& faces) {
  vertices_ = vertices;
  faces_ = faces;
  centroids_.resize(faces.size());
  for (std::size_t f = 0; f < faces.size(); ++f)
    centroids_[f] = (vertices[faces[f][0]] + vertices[faces[f][1]] + vertices[faces[f][2]]) / 3.0;
  order_.resize(faces.size());
  std::iota(order_.begin(), order_.end(), 0);
  nodes_.clear();
  root_ = faces.empty() ? -1 : build_range(0, static_cast<int>(faces.size()));
}

int TriangleBvh::build_range(int begin, int end) {
  int id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  Eigen::Vector3d lo = Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());
  Eigen::Vector3d hi = -lo;
  for (int i = begin; i < end; ++i)
    for (int c = 0; c < 3; ++c) {
      const Eigen::Vector3d& v = vertices_[faces_[order_[i]][c]];
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
  nodes_[id].lo = lo;
  nodes_[id].hi = hi;
  constexpr int kLeafFaces = 4;
  if (end - begin <= kLeafFaces) {
    nodes_[id].begin = begin;
    nodes_[id].end = end;
    return id;
  }
  Eigen::Vector3d clo = centroids_[order_[begin]], chi = clo;
  for (int i = begin + 1; i < end; ++i) {
    clo = clo.cwiseMin(centroids_[order_[i]]);
    chi = chi.cwiseMax(centroids_[order_[i]]);
  }
  int axis;
  (chi - clo).maxCoeff(&axis);
  int mid = (begin + end) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](int a, int b) { return centroids_[a][axis] < centroids_[b][axis]; });
  int left = build_range(begin, mid);
  int right = build_range(mid, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

double TriangleBvh::box_distance2(const Node& n, const Eigen::Vector3d& q) const {
  double d2 = 0.0;
  for (int c = 0; c < 3; ++c) {
    double d = 0.0;
    if (q[c] < n.lo[c])
      d = n.lo[c] - q[c];
    else if (q[c] > n.hi[c])
      d = q[c] - n.hi[c];
    d2 += d * d;
  }
  return d2;
}

void TriangleBvh::search(int node, const Eigen::Vector3d& query, Hit& best) const {
  const Node& n = nodes_[node];
  if (n.left < 0) {
    for (int i = n.begin; i < n.end; ++i) {
      int f = order_[i];
      const auto& tri = faces_[f];
      TrianglePoint tp = closest_point_triangle(query, vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
      double d2 = (query - tp.point).squaredNorm();
      if (d2 < best.squared_distance || (d2 == best.squared_distance && f < best.face)) {
        best.squared_distance = d2;
        best.face = f;
        best.point = tp.point;
        best.bary = tp.bary;
      }
    }
    return;
  }
  double dl = box_distance2(nodes_[n.left], query);
  double dr = box_distance2(nodes_[n.right], query);
  int first = n.left, second = n.right;
  if (dr < dl) {
    std::swap(first, second);
    std::swap(dl, dr);
  }
  if (dl <= best.squared_distance) search(first, query, best);
  if (dr <= best.squared_distance) search(second, query, best);
}

TriangleBvh::Hit TriangleBvh::closest(const Eigen::Vector3d& query) const {
  if (root_ < 0) throw InputError("TriangleBvh: closest on empty tree");
  Hit best;
  best.squared_distance = std::numeric_limits<double>::infinity();
  search(root_, query, best);
  return best;
}

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

double corner_angle(const Eigen::Vector3d& at, const Eigen::Vector3d& p, const Eigen::Vector3d& q) {
  Eigen::Vector3d u = p - at, v = q - at;
  double nu = u.norm(), nv = v.norm();
  if (nu < 1e-30 || nv < 1e-30) return 0.0;
  double c = std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
  return std::acos(c);
}

}  // namespace

void SignedSurface::build(const std::vector<Eigen::Vector3d>& vertices, const std::vector<Eigen::Vector3i>& faces) {
  bvh_.build(vertices, faces);
  face_normals_.assign(faces.size(), Eigen::Vector3d::Zero());
  vertex_normals_.assign(vertices.size(), Eigen::Vector3d::Zero());
  std::vector<std::pair<std::uint64_t, Eigen::Vector3d>> edges;
  edges.reserve(faces.size() * 3);
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const auto& tri = faces[f];
    const Eigen::Vector3d &a = vertices[tri[0]], &b = vertices[tri[1]], &c = vertices[tri[2]];
    Eigen::Vector3d n = (b - a).cross(c - a);
    double len = n.norm();
    if (len > 1e-30) n /= len;
    face_normals_[f] = n;
    vertex_normals_[tri[0]] += corner_angle(a, b, c) * n;
    vertex_normals_[tri[1]] += corner_angle(b, c, a) * n;
    vertex_normals_[tri[2]] += corner_angle(c, a, b) * n;
    edges.emplace_back(edge_key(tri[0], tri[1]), n);
    edges.emplace_back(edge_key(tri[1], tri[2]), n);
    edges.emplace_back(edge_key(tri[2], tri[0]), n);
  }
  std::sort(edges.begin(), edges.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  edge_normals_.clear();
  for (std::size_t i = 0; i < edges.size();) {
    std::uint64_t key = edges[i].first;
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    while (i < edges.size() && edges[i].first == key) sum += edges[i++].second;
    edge_normals_.emplace_back(key, sum);
  }
  for (auto& n : vertex_normals_) {
    double len = n.norm();
    if (len > 1e-30) n /= len;
  }
}

Eigen::Vector3d SignedSurface::edge_normal(int va, int vb) const {
  std::uint64_t key = edge_key(va, vb);
  auto it = std::lower_bound(edge_normals_.begin(), edge_normals_.end(), key,
                             [](const auto& e, std::uint64_t k) { return e.first < k; });
  if (it != edge_normals_.end() && it->first == key) return it->second;
  return Eigen::Vector3d::Zero();
}

Eigen::Vector3d SignedSurface::pseudo_normal(int face, const Eigen::Vector3d& bary) const {
  constexpr double kOnFeature = 1e-9;
  const auto& tri = bvh_.faces()[face];
  int zeros = 0, zero_idx[3] = {0, 0, 0};
  for (int c = 0; c < 3; ++c)
    if (bary[c] <= kOnFeature) zero_idx[zeros++] = c;
  if (zeros == 0) return face_normals_[face];
  if (zeros == 1) {
    // closest point on the edge opposite to the vanished corner
    int i = (zero_idx[0] + 1) % 3, j = (zero_idx[0] + 2) % 3;
    return edge_normal(tri[i], tri[j]);
  }
  // closest point at the remaining corner
  int corner = 3 - zero_idx[0] - zero_idx[1];
  return vertex_normals_[tri[corner]];
}

SignedSurface::Result SignedSurface::query(const Eigen::Vector3d& p) const {
  TriangleBvh::Hit hit = bvh_.closest(p);
  Result r;
  r.face = hit.face;
  r.point = hit.point;
  r.bary = hit.bary;
  double dist = std::sqrt(hit.squared_distance);
  Eigen::Vector3d n = pseudo_normal(hit.face, hit.bary);
  double side = (p - hit.point).dot(n);
  r.signed_distance = side >= 0.0 ? dist : -dist;
  return r;
}

}  // namespace hug::spatial
