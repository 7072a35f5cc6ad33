#pragma once

// Brute-force reference implementations the test suites compare the library
// against. Every oracle repeats the production code's per-element arithmetic
// (same expressions, same accumulation order, ties toward the smaller index)
// so acceleration structures and banding must match it bit-for-bit, not just
// approximately.

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "hug/core/camera.hpp"
#include "hug/core/mesh.hpp"
#include "hug/metrics/metrics.hpp"
#include "hug/spatial/closest_point.hpp"

namespace oracle {

inline int linear_nearest(const std::vector<Eigen::Vector3d>& points, const Eigen::Vector3d& query,
                          double* squared = nullptr) {
  int best = -1;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    double d2 = (points[i] - query).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = static_cast<int>(i);
    }
  }
  if (squared) *squared = best_d2;
  return best;
}

inline double linear_surface_distance2(const std::vector<Eigen::Vector3d>& vertices,
                                       const std::vector<Eigen::Vector3i>& faces, const Eigen::Vector3d& query) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& f : faces) {
    auto tp = hug::spatial::closest_point_triangle(query, vertices[f[0]], vertices[f[1]], vertices[f[2]]);
    best = std::min(best, (query - tp.point).squaredNorm());
  }
  return best;
}

inline double brute_chamfer(const hug::metrics::SampledSurface& p, const hug::metrics::SampledSurface& q,
                            bool mean_of_directions = false) {
  double d_pq = 0.0, d_qp = 0.0, d2 = 0.0;
  for (const auto& pt : p.points) {
    linear_nearest(q.points, pt, &d2);
    d_pq += std::sqrt(d2);
  }
  for (const auto& pt : q.points) {
    linear_nearest(p.points, pt, &d2);
    d_qp += std::sqrt(d2);
  }
  d_pq /= static_cast<double>(p.points.size());
  d_qp /= static_cast<double>(q.points.size());
  double sum = d_pq + d_qp;
  return 100.0 * (mean_of_directions ? 0.5 * sum : sum);
}

inline double brute_p2s(const hug::metrics::SampledSurface& pred, const hug::Mesh& gt, bool squared = false) {
  double total = 0.0;
  for (const auto& pt : pred.points) {
    double cm = 100.0 * std::sqrt(linear_surface_distance2(gt.vertices, gt.faces, pt));
    total += squared ? cm * cm : cm;
  }
  return total / static_cast<double>(pred.points.size());
}

inline double brute_normal_consistency(const hug::metrics::SampledSurface& p, const hug::metrics::SampledSurface& q) {
  double dot_pq = 0.0, dot_qp = 0.0;
  for (std::size_t i = 0; i < p.points.size(); ++i)
    dot_pq += p.normals[i].dot(q.normals[linear_nearest(q.points, p.points[i])]);
  for (std::size_t i = 0; i < q.points.size(); ++i)
    dot_qp += q.normals[i].dot(p.normals[linear_nearest(p.points, q.points[i])]);
  dot_pq /= static_cast<double>(p.points.size());
  dot_qp /= static_cast<double>(q.points.size());
  return 0.5 * (dot_pq + dot_qp);
}

inline double brute_fscore(const hug::metrics::SampledSurface& p, const hug::metrics::SampledSurface& q,
                           double tau_cm = 1.0) {
  std::size_t hit_p = 0, hit_q = 0;
  double d2 = 0.0;
  for (const auto& pt : p.points) {
    linear_nearest(q.points, pt, &d2);
    if (100.0 * std::sqrt(d2) <= tau_cm) ++hit_p;
  }
  for (const auto& pt : q.points) {
    linear_nearest(p.points, pt, &d2);
    if (100.0 * std::sqrt(d2) <= tau_cm) ++hit_q;
  }
  double precision = 100.0 * hit_p / static_cast<double>(p.points.size());
  double recall = 100.0 * hit_q / static_cast<double>(q.points.size());
  if (precision + recall <= 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

inline hug::metrics::ContactPrecisionResult brute_contact_precision(const hug::Scene& pred, const hug::Scene& gt,
                                                                    double delta = 0.01) {
  auto flags = [delta](const hug::Scene& scene) {
    const auto& a = scene.instances[0].vertices;
    const auto& b = scene.instances[1].vertices;
    std::vector<std::uint8_t> out(a.size() + b.size(), 0);
    double d2 = 0.0;
    for (std::size_t v = 0; v < a.size(); ++v) {
      linear_nearest(b, a[v], &d2);
      if (std::sqrt(d2) < delta) out[v] = 1;
    }
    for (std::size_t v = 0; v < b.size(); ++v) {
      linear_nearest(a, b[v], &d2);
      if (std::sqrt(d2) < delta) out[a.size() + v] = 1;
    }
    return out;
  };
  std::vector<std::uint8_t> pred_contact = flags(pred);
  std::vector<std::uint8_t> gt_contact = flags(gt);

  std::vector<Eigen::Vector3d> pred_all = pred.instances[0].vertices;
  pred_all.insert(pred_all.end(), pred.instances[1].vertices.begin(), pred.instances[1].vertices.end());
  std::vector<Eigen::Vector3d> gt_all = gt.instances[0].vertices;
  gt_all.insert(gt_all.end(), gt.instances[1].vertices.begin(), gt.instances[1].vertices.end());

  std::size_t contacts = 0, correct = 0;
  for (std::size_t v = 0; v < pred_all.size(); ++v) {
    if (!pred_contact[v]) continue;
    ++contacts;
    if (gt_contact[linear_nearest(gt_all, pred_all[v])]) ++correct;
  }
  if (contacts == 0) return {0.0, true};
  return {static_cast<double>(correct) / static_cast<double>(contacts), false};
}

// ---------------------------------------------------------------------------
// Rasterizer oracle: per pixel, walk every face in scene-global id order and
// evaluate the edge functions at the pixel centre (point-in-triangle with the
// top-left rule), interpolate depth from the plane through the projected
// corners, and keep the nearest fragment with ties to the smaller face id.
// No bounding boxes, no banding, no threads.

struct BruteRaster {
  int width = 0, height = 0;
  std::vector<float> depth;                // -1 background
  std::vector<std::int32_t> face;          // -1 background
};

inline double edge_fn(double ax, double ay, double bx, double by, double px, double py) {
  return (bx - ax) * (py - ay) - (by - ay) * (px - ax);
}

inline bool edge_top_left(double ax, double ay, double bx, double by) {
  return (ay == by && bx > ax) || (by < ay);
}

inline BruteRaster brute_raster(const hug::Scene& scene, const hug::Camera& camera) {
  const int w = camera.width, h = camera.height;
  BruteRaster out;
  out.width = w;
  out.height = h;
  out.depth.assign(static_cast<std::size_t>(w) * h, -1.0f);
  out.face.assign(static_cast<std::size_t>(w) * h, -1);

  std::int32_t gface = -1;
  for (const auto& mesh : scene.instances) {
    for (const auto& tri : mesh.faces) {
      ++gface;
      double sx[3], sy[3], sd[3];
      bool ok = true;
      for (int c = 0; c < 3; ++c) {
        if (!camera.project(mesh.vertices[tri[c]], sx[c], sy[c], sd[c])) ok = false;
        if (camera.mode == hug::Camera::Mode::Perspective && sd[c] <= 1e-9) ok = false;
      }
      if (!ok) continue;
      int perm[3] = {0, 1, 2};
      double area = edge_fn(sx[0], sy[0], sx[1], sy[1], sx[2], sy[2]);
      if (std::abs(area) < 1e-12) continue;
      if (area < 0.0) {
        std::swap(sx[1], sx[2]);
        std::swap(sy[1], sy[2]);
        std::swap(perm[1], perm[2]);
      }
      for (int y = 0; y < h; ++y) {
        double py = y + 0.5;
        for (int x = 0; x < w; ++x) {
          double px = x + 0.5;
          double w0 = edge_fn(sx[1], sy[1], sx[2], sy[2], px, py);
          double w1 = edge_fn(sx[2], sy[2], sx[0], sy[0], px, py);
          double w2 = edge_fn(sx[0], sy[0], sx[1], sy[1], px, py);
          if (w0 < 0.0 || w1 < 0.0 || w2 < 0.0) continue;
          if (w0 == 0.0 && !edge_top_left(sx[1], sy[1], sx[2], sy[2])) continue;
          if (w1 == 0.0 && !edge_top_left(sx[2], sy[2], sx[0], sy[0])) continue;
          if (w2 == 0.0 && !edge_top_left(sx[0], sy[0], sx[1], sy[1])) continue;
          double wsum = w0 + w1 + w2;
          if (wsum <= 0.0) continue;
          double bary[3];
          bary[perm[0]] = w0 / wsum;
          bary[perm[1]] = w1 / wsum;
          bary[perm[2]] = w2 / wsum;
          double d = bary[0] * sd[0] + bary[1] * sd[1] + bary[2] * sd[2];
          std::size_t i = static_cast<std::size_t>(y) * w + x;
          float df = static_cast<float>(d);
          bool covered = out.face[i] >= 0;
          if (covered && (df > out.depth[i] || (df == out.depth[i] && gface >= out.face[i]))) continue;
          out.depth[i] = df;
          out.face[i] = gface;
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Randomized geometry for the oracle comparisons.

/// Random triangle soup in a box: `nv` vertices, `nf` faces over distinct
/// vertex triples. Degenerate triangles can occur and are part of the test.
inline hug::Mesh random_mesh(std::mt19937_64& rng, std::size_t nv, std::size_t nf,
                             const Eigen::Vector3d& center = Eigen::Vector3d::Zero(), double half_extent = 0.5) {
  std::uniform_real_distribution<double> coord(-half_extent, half_extent);
  std::uniform_int_distribution<std::size_t> pick(0, nv - 1);
  hug::Mesh mesh;
  mesh.instance_id = 1;
  mesh.vertices.reserve(nv);
  for (std::size_t v = 0; v < nv; ++v)
    mesh.vertices.push_back(center + Eigen::Vector3d(coord(rng), coord(rng), coord(rng)));
  while (mesh.faces.size() < nf) {
    std::size_t a = pick(rng), b = pick(rng), c = pick(rng);
    if (a == b || b == c || a == c) continue;
    mesh.faces.emplace_back(static_cast<int>(a), static_cast<int>(b), static_cast<int>(c));
  }
  return mesh;
}

/// Two random blobs close enough that contact vertices exist for moderate
/// deltas; sized within the acceptance bound (<= 2k vertices / 500 faces).
inline hug::Scene random_two_instance_scene(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> nv(40, 900);
  std::uniform_int_distribution<std::size_t> nf(30, 250);
  std::uniform_real_distribution<double> gap(-0.1, 0.4);
  hug::Scene scene;
  scene.instances.push_back(random_mesh(rng, nv(rng), nf(rng), Eigen::Vector3d::Zero(), 0.5));
  scene.instances.push_back(random_mesh(rng, nv(rng), nf(rng), Eigen::Vector3d(1.0 + gap(rng), 0.0, 0.0), 0.5));
  scene.instances[0].instance_id = 1;
  scene.instances[1].instance_id = 2;
  return scene;
}

/// Closed axis-aligned box, outward winding, 12 triangles. Exact separations
/// for the closed-form penetration tests.
inline hug::Mesh box_mesh(const Eigen::Vector3d& lo, const Eigen::Vector3d& hi, int instance_id,
                          std::int32_t part = 1) {
  hug::Mesh mesh;
  mesh.instance_id = instance_id;
  for (int i = 0; i < 8; ++i)
    mesh.vertices.emplace_back(i & 1 ? hi.x() : lo.x(), i & 2 ? hi.y() : lo.y(), i & 4 ? hi.z() : lo.z());
  const int quads[6][4] = {
      {0, 4, 6, 2},  // x = lo
      {1, 3, 7, 5},  // x = hi
      {0, 1, 5, 4},  // y = lo
      {2, 6, 7, 3},  // y = hi
      {0, 2, 3, 1},  // z = lo
      {4, 5, 7, 6},  // z = hi
  };
  for (const auto& q : quads) {
    mesh.faces.emplace_back(q[0], q[1], q[2]);
    mesh.faces.emplace_back(q[0], q[2], q[3]);
  }
  mesh.part_labels.assign(mesh.vertices.size(), part);
  return mesh;
}

}  // namespace oracle
