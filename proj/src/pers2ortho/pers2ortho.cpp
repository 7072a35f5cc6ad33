#include "hug/pers2ortho/pers2ortho.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>

#include "hug/canonical/rig.hpp"
#include "hug/core/errors.hpp"
#include "hug/diff/frozen.hpp"
#include "hug/imgproc/filters.hpp"
#include "hug/imgproc/morphology.hpp"
#include "hug/io/image_io.hpp"
#include "hug/opt/adam.hpp"
#include "hug/render/rasterizer.hpp"

namespace hug::p2o {

namespace fs = std::filesystem;

void PartialViewSet::validate() const {
  for (const auto& [idx, rgb] : partial_rgb) {
    bool allowed = false;
    for (int v : kPartialViews) allowed = allowed || v == idx;
    if (!allowed) throw InputError("PartialViewSet: partial rgb view index must be one of {0,1,5}");
    auto vis = visibility.find(idx);
    if (vis == visibility.end()) throw InputError("PartialViewSet: partial rgb without visibility mask");
    if (rgb.width != vis->second.width || rgb.height != vis->second.height || rgb.channels != 3 ||
        vis->second.channels != 1)
      throw InputError("PartialViewSet: rgb/visibility shape mismatch");
  }
  for (const auto& [idx, n] : smplx_normals) {
    if (idx < 0 || idx > 5) throw InputError("PartialViewSet: normal view index out of range");
    if (n.channels != 3) throw InputError("PartialViewSet: normals must have 3 channels");
  }
}

ColoredPointCloud depth_to_pointcloud(const ImageBuffer& depth, const ImageBuffer& rgb, const Camera& camera,
                                      const ImageBuffer& valid_mask) {
  if (!depth.same_shape(valid_mask) || depth.width != rgb.width || depth.height != rgb.height)
    throw InputError("depth_to_pointcloud: buffer sizes differ");
  if (depth.width != camera.width || depth.height != camera.height)
    throw InputError("depth_to_pointcloud: buffers do not match the camera");
  ColoredPointCloud cloud;
  for (int y = 0; y < depth.height; ++y)
    for (int x = 0; x < depth.width; ++x) {
      if (valid_mask.at(x, y) < 0.5f) continue;
      double d = depth.at(x, y);
      cloud.points.push_back(camera.unproject(x + 0.5, y + 0.5, d));
      cloud.colors.emplace_back(rgb.at(x, y, 0), rgb.at(x, y, 1), rgb.at(x, y, 2));
      cloud.source_pixels.emplace_back(x, y);
    }
  return cloud;
}

ImageBuffer depth_edge_filter(const ImageBuffer& depth, const ImageBuffer& fg_mask, int erode_kernel,
                              int dilate_kernel) {
  if (!depth.same_shape(fg_mask)) throw InputError("depth_edge_filter: buffer sizes differ");
  ImageBuffer eroded = img::erode(fg_mask, erode_kernel);
  // the fg/bg step also fires Canny along the silhouette rim; boundary
  // pixels are exactly the ghosting this filter exists to drop
  ImageBuffer norm = img::normalize_over_mask(depth, eroded, 0.0f);
  ImageBuffer edges = img::canny(norm);
  ImageBuffer grown = img::dilate(edges, dilate_kernel);
  ImageBuffer validity(depth.width, depth.height, Semantic::Mask, 0.0f);
  for (std::size_t i = 0; i < validity.pixel_count(); ++i)
    validity.data[i] = (eroded.data[i] > 0.5f && grown.data[i] < 0.5f) ? 1.0f : 0.0f;
  return validity;
}

ColoredPointCloud visible_point_select(const ColoredPointCloud& pcd, const ImageBuffer& mesh_depth,
                                       const Camera& camera, double tau) {
  if (mesh_depth.width != camera.width || mesh_depth.height != camera.height)
    throw InputError("visible_point_select: depth buffer does not match the camera");
  pcd.validate();
  ColoredPointCloud kept;
  bool pixels = pcd.has_source_pixels();
  for (std::size_t i = 0; i < pcd.size(); ++i) {
    double u, v, d;
    if (!camera.project(pcd.points[i], u, v, d)) continue;
    int px = static_cast<int>(std::floor(u));
    int py = static_cast<int>(std::floor(v));
    if (px < 0 || px >= camera.width || py < 0 || py >= camera.height) continue;
    double zm = mesh_depth.at(px, py);
    if (zm <= 0.0) continue;
    if (std::abs(zm - d) >= tau) continue;
    kept.points.push_back(pcd.points[i]);
    kept.colors.push_back(pcd.colors[i]);
    if (pixels) kept.source_pixels.push_back(pcd.source_pixels[i]);
  }
  return kept;
}

Reprojection reproject_pcd(const ColoredPointCloud& pcd, const Camera& target) {
  if (target.mode != Camera::Mode::Orthographic)
    throw InputError("reproject_pcd: target camera must be orthographic");
  pcd.validate();
  Reprojection out{ImageBuffer(target.width, target.height, Semantic::Rgb, 0.0f),
                   ImageBuffer(target.width, target.height, Semantic::Mask, 0.0f),
                   ImageBuffer(target.width, target.height, Semantic::Depth, kDepthBackground)};
  for (std::size_t i = 0; i < pcd.size(); ++i) {
    double u, v, d;
    target.project(pcd.points[i], u, v, d);
    int px = static_cast<int>(std::floor(u));
    int py = static_cast<int>(std::floor(v));
    if (px < 0 || px >= target.width || py < 0 || py >= target.height) continue;
    float cur = out.depth.at(px, py);
    if (cur >= 0.0f && static_cast<float>(d) >= cur) continue;
    out.depth.at(px, py) = static_cast<float>(d);
    out.visibility.at(px, py) = 1.0f;
    for (int c = 0; c < 3; ++c) out.rgb.at(px, py, c) = static_cast<float>(pcd.colors[i][c]);
  }
  return out;
}

Mesh refine_partial_geometry(const Mesh& mesh, const ImageBuffer& target_depth, const ImageBuffer& target_normal,
                             const Camera& camera, int iters, double lr) {
  mesh.validate();
  if (mesh.vertices.size() < 4) throw InputError("refine_partial_geometry: mesh needs at least 4 vertices");
  if (iters < 0) throw InputError("refine_partial_geometry: negative iteration count");

  Scene scene;
  scene.instances.push_back(mesh);
  if (scene.instances[0].instance_id < 1) scene.instances[0].instance_id = 1;

  diff::SceneParam param = diff::SceneParam::from_scene(scene);
  opt::Adam adam(param.positions.size());

  render::RasterizeOptions opts;
  opts.barycentrics = true;

  std::vector<Eigen::Vector3d> best = param.positions;
  double best_loss = std::numeric_limits<double>::infinity();
  std::vector<Eigen::Vector3d> grad;

  for (int it = 0; it <= iters; ++it) {
    param.write_back(scene);
    render::RenderOutput render = render::rasterize(scene, camera, opts);
    diff::FrozenView view = diff::freeze_view(render, camera, target_normal, &target_depth);
    if (view.pixels.empty()) throw InputError("refine_partial_geometry: empty foreground overlap");
    diff::FrozenLoss loss(param, {view}, /*pixel_mean=*/false);

    double value = loss.eval_with_grad(param.positions, grad);
    if (value < best_loss) {
      best_loss = value;
      best = param.positions;
    }
    // converged at numerical noise; stepping further would only random-walk
    if (value <= 1e-9 * static_cast<double>(view.pixels.size())) break;
    if (it == iters) break;

    adam.step(param.positions, grad, lr);
    bool finite = true;
    for (const auto& p : param.positions) finite = finite && p.allFinite();
    if (!finite) break;  // keep the best finite iterate
  }

  param.positions = best;
  param.write_back(scene);
  Mesh out = scene.instances[0];
  out.instance_id = mesh.instance_id;
  return out;
}

namespace {

std::string view_dir_name(int view_index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "view_%03d", static_cast<int>(canonical::CanonicalRig::kAzimuths[view_index]));
  return buf;
}

}  // namespace

void save_partial_views(const PartialViewSet& views, const std::string& dir) {
  views.validate();
  for (const auto& [idx, rgb] : views.partial_rgb) {
    fs::path d = fs::path(dir) / view_dir_name(idx);
    fs::create_directories(d);
    io::write_png(d / "rgb.png", rgb);
    io::write_png(d / "mask.png", views.visibility.at(idx));
  }
  for (const auto& [idx, normal] : views.smplx_normals) {
    fs::path d = fs::path(dir) / view_dir_name(idx);
    fs::create_directories(d);
    io::write_pfm(d / "normal.pfm", normal);
  }
}

PartialViewSet load_partial_views(const std::string& dir) {
  PartialViewSet out;
  for (int idx = 0; idx < canonical::CanonicalRig::kViews; ++idx) {
    fs::path d = fs::path(dir) / view_dir_name(idx);
    if (fs::exists(d / "rgb.png")) {
      out.partial_rgb[idx] = io::read_png(d / "rgb.png", Semantic::Rgb);
      out.visibility[idx] = io::read_png(d / "mask.png", Semantic::Mask);
    }
    if (fs::exists(d / "normal.pfm")) out.smplx_normals[idx] = io::read_pfm(d / "normal.pfm", Semantic::Normal);
  }
  out.validate();
  return out;
}

}  // namespace hug::p2o
