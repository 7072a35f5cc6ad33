#pragma once

#include <map>
#include <string>

#include "hug/core/camera.hpp"
#include "hug/core/image.hpp"
#include "hug/core/mesh.hpp"
#include "hug/core/pointcloud.hpp"

namespace hug::p2o {

/// Indices of the canonical views that receive reprojected partial RGB
/// (azimuths 0, 45, 315).
constexpr int kPartialViews[3] = {0, 1, 5};

/// Partial observations in canonical view space: reprojected colors with
/// their visibility masks for views {0,1,5} and body-model normal renders
/// for all six views.
struct PartialViewSet {
  std::map<int, ImageBuffer> partial_rgb;
  std::map<int, ImageBuffer> visibility;
  std::map<int, ImageBuffer> smplx_normals;

  void validate() const;
};

/// One world-frame point per on-mask pixel, unprojected through the camera
/// at the pixel center, colored from rgb.
ColoredPointCloud depth_to_pointcloud(const ImageBuffer& depth, const ImageBuffer& rgb, const Camera& camera,
                                      const ImageBuffer& valid_mask);

/// Validity mask that drops depth-discontinuity pixels: the foreground is
/// eroded, depth is normalized to [0,1] over the eroded region, Canny edges
/// are extracted and dilated, and validity = eroded foreground minus the
/// dilated edges. The silhouette rim counts as a discontinuity.
ImageBuffer depth_edge_filter(const ImageBuffer& depth, const ImageBuffer& fg_mask, int erode_kernel = 3,
                              int dilate_kernel = 5);

/// Keeps points whose projection lands in frame on a foreground mesh-depth
/// pixel (depth > 0) within tau of the point's own depth (strict <,
/// nearest-pixel sampling).
ColoredPointCloud visible_point_select(const ColoredPointCloud& pcd, const ImageBuffer& mesh_depth,
                                       const Camera& camera, double tau = 0.02);

struct Reprojection {
  ImageBuffer rgb;         // background pixels stay black
  ImageBuffer visibility;  // 1 where >= 1 point landed
  ImageBuffer depth;       // winning point depth, background sentinel elsewhere
};

/// Splats the cloud into an orthographic target view with 1-pixel
/// footprints; the nearest point wins each pixel.
Reprojection reproject_pcd(const ColoredPointCloud& pcd, const Camera& target);

/// Adam refinement of mesh vertices against affine-invariant depth and
/// normal targets: L = sum over shared foreground of (d^ - t^)^2 +
/// (1 - <n, n_target>), both depths standardized over that foreground,
/// rasterization coverage re-frozen every iteration. Returns the iterate
/// with the lowest recorded loss, so the final loss never exceeds the
/// initial one.
Mesh refine_partial_geometry(const Mesh& mesh, const ImageBuffer& target_depth, const ImageBuffer& target_normal,
                             const Camera& camera, int iters = 200, double lr = 0.02);

/// Directory layout round trip: view_{azimuth:03d}/ holding rgb.png +
/// mask.png for the partial views and normal.pfm for every view present.
void save_partial_views(const PartialViewSet& views, const std::string& dir);
PartialViewSet load_partial_views(const std::string& dir);

}  // namespace hug::p2o
