#include "hug/texture/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "hug/core/errors.hpp"
#include "hug/imgproc/filters.hpp"
#include "hug/imgproc/morphology.hpp"
#include "hug/render/rasterizer.hpp"

namespace hug::texture {

namespace {

/// Bilinear over the foreground pixels of the 2x2 neighborhood, weights
/// renormalized so background never bleeds into surface colors. False when
/// no neighbor is foreground.
bool sample_bilinear(const ImageBuffer& rgb, const ImageBuffer& fg, double u, double v, Eigen::Vector3d& out) {
  // (u,v) are continuous image coords; pixel centres sit at (x+0.5, y+0.5)
  double xf = u - 0.5, yf = v - 0.5;
  int x0 = static_cast<int>(std::floor(xf));
  int y0 = static_cast<int>(std::floor(yf));
  double ax = xf - x0, ay = yf - y0;
  auto clampx = [&](int x) { return std::clamp(x, 0, rgb.width - 1); };
  auto clampy = [&](int y) { return std::clamp(y, 0, rgb.height - 1); };
  int xs[2] = {clampx(x0), clampx(x0 + 1)};
  int ys[2] = {clampy(y0), clampy(y0 + 1)};
  double wx[2] = {1.0 - ax, ax};
  double wy[2] = {1.0 - ay, ay};
  out.setZero();
  double total = 0.0;
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i) {
      if (fg.at(xs[i], ys[j]) == 0.0f) continue;
      double w = wx[i] * wy[j];
      for (int c = 0; c < 3; ++c) out[c] += w * rgb.at(xs[i], ys[j], c);
      total += w;
    }
  if (total <= 1e-9) return false;
  out /= total;
  return true;
}

}  // namespace

ImageBuffer edge_confidence_mask(const ImageBuffer& depth, const ImageBuffer& fg_mask, int dilate_kernel) {
  if (!depth.same_shape(fg_mask)) throw InputError("edge_confidence_mask: shape mismatch");
  ImageBuffer normalized = img::normalize_over_mask(depth, fg_mask, 0.0f);
  ImageBuffer edges = img::canny(normalized);
  ImageBuffer zone = img::dilate(edges, dilate_kernel);
  ImageBuffer confidence(depth.width, depth.height, Semantic::Mask);
  for (int y = 0; y < depth.height; ++y)
    for (int x = 0; x < depth.width; ++x)
      confidence.at(x, y) = (fg_mask.at(x, y) != 0.0f && zone.at(x, y) == 0.0f) ? 1.0f : 0.0f;
  return confidence;
}

Mesh fuse_texture(const Mesh& mesh, const std::vector<FusionView>& views,
                  const std::vector<std::vector<std::uint8_t>>& rig_visibility, int dilate_kernel,
                  bool* unseen_warning, std::vector<ViewContribution>* contributions) {
  mesh.validate();
  if (views.empty()) throw InputError("fuse_texture: needs at least one view");
  if (rig_visibility.size() != views.size())
    throw InputError("fuse_texture: one visibility vector per view required");
  const std::size_t n = mesh.vertices.size();
  for (const auto& vis : rig_visibility)
    if (vis.size() != n) throw InputError("fuse_texture: visibility vector size mismatch");
  if (unseen_warning) *unseen_warning = false;
  if (contributions) contributions->clear();

  VertexNormals normals = compute_vertex_normals(mesh);

  std::vector<Eigen::Vector3d> color_sum(n, Eigen::Vector3d::Zero());
  std::vector<double> weight_sum(n, 0.0);

  for (std::size_t i = 0; i < views.size(); ++i) {
    const FusionView& view = views[i];
    view.camera.validate();
    if (!view.rgb.same_shape(view.depth) && view.rgb.width * view.rgb.height == 0)
      throw InputError("fuse_texture: empty view buffers");
    if (view.rgb.width != view.depth.width || view.rgb.height != view.depth.height)
      throw InputError("fuse_texture: rgb/depth size mismatch");
    if (view.rgb.channels != 3) throw InputError("fuse_texture: rgb must be three-channel");

    ImageBuffer fg(view.depth.width, view.depth.height, Semantic::Mask);
    for (int y = 0; y < fg.height; ++y)
      for (int x = 0; x < fg.width; ++x) fg.at(x, y) = view.depth.at(x, y) > 0.0f ? 1.0f : 0.0f;
    ImageBuffer confidence = edge_confidence_mask(view.depth, fg, dilate_kernel);

    // part gate: depth tolerances cannot separate surfaces closer than a
    // pixel footprint (a chin vertex grazing the torso behind it), but the
    // mesh's own part map can. Render it once per view when labels exist.
    std::vector<std::int32_t> own_parts;
    if (!mesh.part_labels.empty() && view.camera.width == view.depth.width &&
        view.camera.height == view.depth.height) {
      Scene solo;
      solo.instances.push_back(mesh);
      if (solo.instances[0].instance_id < 1) solo.instances[0].instance_id = 1;
      render::RasterizeOptions part_opts;
      part_opts.parts = true;
      own_parts = render::rasterize(solo, view.camera, part_opts).part_label;
    }

    ViewContribution debug;
    if (contributions) {
      debug.view_index = static_cast<int>(i);
      debug.confidence_mask = confidence;
      debug.rgb = view.rgb;
      debug.per_vertex_weight.assign(n, 0.0);
    }

    for (std::size_t v = 0; v < n; ++v) {
      if (!rig_visibility[i][v]) continue;
      double u, pv, d;
      if (!view.camera.project(mesh.vertices[v], u, pv, d)) continue;
      int px = static_cast<int>(std::floor(u));
      int py = static_cast<int>(std::floor(pv));
      if (px < 0 || py < 0 || px >= confidence.width || py >= confidence.height) continue;
      if (confidence.at(px, py) == 0.0f) continue;
      if (!own_parts.empty() &&
          own_parts[static_cast<std::size_t>(py) * view.depth.width + px] != mesh.part_labels[v])
        continue;
      Eigen::Vector3d to_camera = view.camera.mode == Camera::Mode::Orthographic
                                      ? (-view.camera.gaze()).eval()
                                      : (view.camera.eye() - mesh.vertices[v]).normalized().eval();
      double w = std::max(0.0, normals.normals[v].dot(to_camera));
      if (w <= 0.0) continue;
      Eigen::Vector3d sample;
      if (!sample_bilinear(view.rgb, fg, u, pv, sample)) continue;
      color_sum[v] += w * sample;
      weight_sum[v] += w;
      if (contributions) debug.per_vertex_weight[v] = w;
    }
    if (contributions) contributions->push_back(std::move(debug));
  }

  Mesh out = mesh;
  out.vertex_colors.assign(n, Eigen::Vector3d::Constant(0.5));
  std::vector<std::uint8_t> colored(n, 0);
  bool any = false;
  for (std::size_t v = 0; v < n; ++v) {
    if (weight_sum[v] <= 0.0) continue;
    out.vertex_colors[v] = color_sum[v] / weight_sum[v];
    colored[v] = 1;
    any = true;
  }
  if (!any) {
    if (unseen_warning) *unseen_warning = true;
    return out;
  }

  // breadth-first fill over mesh edges: every uncolored vertex copies the
  // nearest colored one, ties resolved by vertex order
  std::vector<std::vector<int>> adjacency(n);
  for (const auto& f : mesh.faces)
    for (int c = 0; c < 3; ++c) {
      adjacency[f[c]].push_back(f[(c + 1) % 3]);
      adjacency[f[c]].push_back(f[(c + 2) % 3]);
    }
  std::deque<int> queue;
  for (std::size_t v = 0; v < n; ++v)
    if (colored[v]) queue.push_back(static_cast<int>(v));
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int nb : adjacency[v]) {
      if (colored[nb]) continue;
      out.vertex_colors[nb] = out.vertex_colors[v];
      colored[nb] = 1;
      queue.push_back(nb);
    }
  }
  return out;
}

}  // namespace hug::texture
