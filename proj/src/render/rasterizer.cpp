#include "hug/render/rasterizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hug/core/errors.hpp"
#include "hug/core/parallel.hpp"

namespace hug::render {

namespace {

constexpr double kMinFaceDepth = 1e-9;    // perspective camera-plane guard
constexpr double kMinScreenArea = 1e-12;  // doubled signed area, pixels^2

struct FaceRecord {
  double sx[3], sy[3];   // screen coords, reordered to positive orientation
  int perm[3];           // reordered slot -> original corner
  double depth[3];       // per original corner
  Eigen::Vector3d n_gf[3];  // vertex normals, gaze frame, original corners
  Eigen::Vector3d rgb[3];
  std::int32_t gface = 0;
  std::int32_t instance_id = 0;
  std::int32_t part = 0;
  int x0 = 0, x1 = -1, y0 = 0, y1 = -1;  // inclusive pixel bounds
};

inline double edge_fn(double ax, double ay, double bx, double by, double px, double py) {
  return (bx - ax) * (py - ay) - (by - ay) * (px - ax);
}

inline bool edge_top_left(double ax, double ay, double bx, double by) {
  // positive-orientation boundary, y down: top edges run right, left edges run up
  return (ay == by && bx > ax) || (by < ay);
}

}  // namespace

std::vector<std::size_t> face_offsets(const Scene& scene) {
  std::vector<std::size_t> off(scene.instances.size() + 1, 0);
  for (std::size_t i = 0; i < scene.instances.size(); ++i) off[i + 1] = off[i] + scene.instances[i].faces.size();
  return off;
}

std::vector<std::size_t> vertex_offsets(const Scene& scene) {
  std::vector<std::size_t> off(scene.instances.size() + 1, 0);
  for (std::size_t i = 0; i < scene.instances.size(); ++i) off[i + 1] = off[i] + scene.instances[i].vertices.size();
  return off;
}

ImageBuffer RenderOutput::foreground_mask() const {
  ImageBuffer mask(width, height, Semantic::Mask);
  for (std::size_t i = 0; i < mask.pixel_count(); ++i) mask.data[i] = depth.data[i] >= 0.0f ? 1.0f : 0.0f;
  return mask;
}

ImageBuffer RenderOutput::instance_mask(int instance_id) const {
  ImageBuffer mask(width, height, Semantic::Mask);
  for (std::size_t i = 0; i < mask.pixel_count(); ++i)
    mask.data[i] = instance_map.data[i] == static_cast<float>(instance_id) ? 1.0f : 0.0f;
  return mask;
}

ImageBuffer RenderOutput::part_mask(int instance_id, std::int32_t part) const {
  if (part_label.empty()) throw InputError("part_mask: rasterize was run without options.parts");
  ImageBuffer mask(width, height, Semantic::Mask);
  for (std::size_t i = 0; i < mask.pixel_count(); ++i)
    mask.data[i] =
        (instance_map.data[i] == static_cast<float>(instance_id) && part_label[i] == part) ? 1.0f : 0.0f;
  return mask;
}

RenderOutput rasterize(const Scene& scene, const Camera& camera, const RasterizeOptions& options) {
  scene.validate();
  camera.validate();
  const int w = camera.width, h = camera.height;

  RenderOutput out;
  out.width = w;
  out.height = h;
  out.depth = ImageBuffer(w, h, Semantic::Depth, kDepthBackground);
  out.normal = ImageBuffer(w, h, Semantic::Normal, 0.0f);
  out.instance_map = ImageBuffer(w, h, Semantic::Instance, 0.0f);
  if (options.rgb) out.rgb = ImageBuffer(w, h, Semantic::Rgb, 0.0f);
  std::size_t npx = static_cast<std::size_t>(w) * h;
  out.face_index_map.assign(npx, -1);
  if (options.parts) out.part_label.assign(npx, 0);
  if (options.barycentrics) {
    out.bary.assign(npx * 3, 0.0f);
    out.normal_flip.assign(npx, 1.0f);
  }

  // project every face up front; records are rasterized in gface order
  Eigen::Matrix3d gaze = camera.gaze_frame();
  std::vector<FaceRecord> records;
  records.reserve(scene.total_faces());
  auto foff = face_offsets(scene);
  for (std::size_t mi = 0; mi < scene.instances.size(); ++mi) {
    const Mesh& mesh = scene.instances[mi];
    VertexNormals vn = compute_vertex_normals(mesh);
    std::vector<double> su(mesh.vertices.size()), sv(mesh.vertices.size()), sd(mesh.vertices.size());
    std::vector<std::uint8_t> ok(mesh.vertices.size(), 1);
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
      double u, vv, d;
      bool projected = camera.project(mesh.vertices[v], u, vv, d);
      su[v] = u;
      sv[v] = vv;
      sd[v] = d;
      ok[v] = projected && (camera.mode != Camera::Mode::Perspective || d > kMinFaceDepth);
    }
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
      const auto& tri = mesh.faces[f];
      if (!ok[tri[0]] || !ok[tri[1]] || !ok[tri[2]]) continue;
      FaceRecord rec;
      for (int c = 0; c < 3; ++c) {
        rec.sx[c] = su[tri[c]];
        rec.sy[c] = sv[tri[c]];
        rec.perm[c] = c;
        rec.depth[c] = sd[tri[c]];
        rec.n_gf[c] = gaze * vn.normals[tri[c]];
        rec.rgb[c] = mesh.has_colors() ? mesh.vertex_colors[tri[c]] : Eigen::Vector3d::Constant(0.5);
      }
      double area = edge_fn(rec.sx[0], rec.sy[0], rec.sx[1], rec.sy[1], rec.sx[2], rec.sy[2]);
      if (std::abs(area) < kMinScreenArea) continue;
      if (area < 0.0) {  // reorder to positive orientation, keep corner mapping
        std::swap(rec.sx[1], rec.sx[2]);
        std::swap(rec.sy[1], rec.sy[2]);
        std::swap(rec.perm[1], rec.perm[2]);
      }
      double ulo = std::min({rec.sx[0], rec.sx[1], rec.sx[2]});
      double uhi = std::max({rec.sx[0], rec.sx[1], rec.sx[2]});
      double vlo = std::min({rec.sy[0], rec.sy[1], rec.sy[2]});
      double vhi = std::max({rec.sy[0], rec.sy[1], rec.sy[2]});
      // pixel (x,y) samples at centre (x+0.5, y+0.5)
      rec.x0 = std::max(0, static_cast<int>(std::ceil(ulo - 0.5)));
      rec.x1 = std::min(w - 1, static_cast<int>(std::floor(uhi - 0.5)));
      rec.y0 = std::max(0, static_cast<int>(std::ceil(vlo - 0.5)));
      rec.y1 = std::min(h - 1, static_cast<int>(std::floor(vhi - 0.5)));
      if (rec.x0 > rec.x1 || rec.y0 > rec.y1) continue;
      rec.gface = static_cast<std::int32_t>(foff[mi] + f);
      rec.instance_id = mesh.instance_id;
      rec.part = options.parts ? face_part_label(mesh, static_cast<int>(f)) : 0;
      records.push_back(rec);
    }
  }

  // Band the image by rows; each band walks its faces in gface order. The
  // per-pixel winner is the (depth, gface) minimum over covering fragments,
  // a pure function of the fragment set, so banding cannot change it.
  int threads = resolve_thread_count(options.threads);
  int bands = std::min(threads, std::max(1, h));
  std::vector<std::vector<const FaceRecord*>> band_faces(bands);
  int band_rows = (h + bands - 1) / bands;
  for (const FaceRecord& rec : records) {
    int b0 = rec.y0 / band_rows, b1 = rec.y1 / band_rows;
    for (int b = b0; b <= b1; ++b) band_faces[b].push_back(&rec);
  }

  parallel_chunks(0, static_cast<std::size_t>(bands), bands, [&](std::size_t bb, std::size_t be, int) {
    for (std::size_t b = bb; b < be; ++b) {
      int row_lo = static_cast<int>(b) * band_rows;
      int row_hi = std::min(h - 1, row_lo + band_rows - 1);
      for (const FaceRecord* rec : band_faces[b]) {
        int fy0 = std::max(rec->y0, row_lo), fy1 = std::min(rec->y1, row_hi);
        for (int y = fy0; y <= fy1; ++y) {
          double py = y + 0.5;
          for (int x = rec->x0; x <= rec->x1; ++x) {
            double px = x + 0.5;
            double w0 = edge_fn(rec->sx[1], rec->sy[1], rec->sx[2], rec->sy[2], px, py);
            double w1 = edge_fn(rec->sx[2], rec->sy[2], rec->sx[0], rec->sy[0], px, py);
            double w2 = edge_fn(rec->sx[0], rec->sy[0], rec->sx[1], rec->sy[1], px, py);
            if (w0 < 0.0 || w1 < 0.0 || w2 < 0.0) continue;
            if (w0 == 0.0 && !edge_top_left(rec->sx[1], rec->sy[1], rec->sx[2], rec->sy[2])) continue;
            if (w1 == 0.0 && !edge_top_left(rec->sx[2], rec->sy[2], rec->sx[0], rec->sy[0])) continue;
            if (w2 == 0.0 && !edge_top_left(rec->sx[0], rec->sy[0], rec->sx[1], rec->sy[1])) continue;
            double wsum = w0 + w1 + w2;
            if (wsum <= 0.0) continue;
            double b0 = w0 / wsum, b1 = w1 / wsum, b2 = w2 / wsum;
            double bary[3];  // original corner order
            bary[rec->perm[0]] = b0;
            bary[rec->perm[1]] = b1;
            bary[rec->perm[2]] = b2;
            double d = bary[0] * rec->depth[0] + bary[1] * rec->depth[1] + bary[2] * rec->depth[2];
            std::size_t px_idx = static_cast<std::size_t>(y) * w + x;
            float df = static_cast<float>(d);
            float cur = out.depth.data[px_idx];
            bool covered = out.face_index_map[px_idx] >= 0;
            if (covered && (df > cur || (df == cur && rec->gface >= out.face_index_map[px_idx]))) continue;

            out.depth.data[px_idx] = df;
            out.face_index_map[px_idx] = rec->gface;
            out.instance_map.data[px_idx] = static_cast<float>(rec->instance_id);
            if (options.parts) out.part_label[px_idx] = rec->part;

            Eigen::Vector3d n = bary[0] * rec->n_gf[0] + bary[1] * rec->n_gf[1] + bary[2] * rec->n_gf[2];
            double len = n.norm();
            if (len < 1e-12) {
              n = Eigen::Vector3d(0, 0, -1);  // fully cancelled: fall back to facing
            } else {
              n /= len;
            }
            float flip = 1.0f;
            if (n.z() > 0.0) {
              n = -n;
              flip = -1.0f;
            }
            for (int c = 0; c < 3; ++c) out.normal.data[px_idx * 3 + c] = static_cast<float>(n[c]);
            if (options.rgb) {
              Eigen::Vector3d col = bary[0] * rec->rgb[0] + bary[1] * rec->rgb[1] + bary[2] * rec->rgb[2];
              for (int c = 0; c < 3; ++c) out.rgb->data[px_idx * 3 + c] = static_cast<float>(col[c]);
            }
            if (options.barycentrics) {
              for (int c = 0; c < 3; ++c) out.bary[px_idx * 3 + c] = static_cast<float>(bary[c]);
              out.normal_flip[px_idx] = flip;
            }
          }
        }
      }
    }
  });
  return out;
}

std::vector<std::uint8_t> vertex_visibility(const Mesh& mesh, const Camera& camera, const ImageBuffer& scene_depth,
                                            double eps) {
  if (scene_depth.width != camera.width || scene_depth.height != camera.height)
    throw InputError("vertex_visibility: depth buffer does not match camera");
  std::vector<std::uint8_t> visible(mesh.vertices.size(), 0);
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    double u, vv, d;
    if (!camera.project(mesh.vertices[v], u, vv, d)) continue;
    if (camera.mode == Camera::Mode::Perspective && d <= kMinFaceDepth) continue;
    int px = static_cast<int>(std::floor(u));
    int py = static_cast<int>(std::floor(vv));
    if (px < 0 || px >= camera.width || py < 0 || py >= camera.height) continue;
    float buf = scene_depth.at(px, py);
    if (buf < 0.0f) continue;  // background
    // occlusion test, not equality: a vertex in front of the recorded
    // surface is visible (its pixel center was won by a farther face)
    if (d < static_cast<double>(buf) + eps) visible[v] = 1;
  }
  return visible;
}

}  // namespace hug::render
