#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hug/core/camera.hpp"
#include "hug/core/image.hpp"
#include "hug/core/mesh.hpp"
#include "hug/render/rasterizer.hpp"

namespace hug::metrics {

/// Uniform area-weighted surface samples. Normals are the source face
/// normals (unit).
struct SampledSurface {
  std::vector<Eigen::Vector3d> points;
  std::vector<Eigen::Vector3d> normals;
  int source_id = 0;
};

/// Area-proportional face choice plus uniform barycentric sampling,
/// deterministic under seed. Degenerate faces are never chosen; a mesh with
/// no non-degenerate face throws.
SampledSurface sample_surface(const Mesh& mesh, std::size_t n = 100000, std::uint64_t seed = 0);
SampledSurface sample_surface(const Scene& scene, std::size_t n = 100000, std::uint64_t seed = 0);

/// Bidirectional mean nearest-neighbour distance in centimetres:
/// mean_p min_q ||p-q|| + mean_q min_p ||q-p||. `mean_of_directions`
/// averages the two terms instead of summing.
double chamfer(const SampledSurface& p, const SampledSurface& q, bool mean_of_directions = false);

/// Mean point-to-triangle distance of the samples to the mesh surface, in
/// centimetres; `squared` squares each distance (cm^2) before the mean.
double p2s(const SampledSurface& pred, const Mesh& gt, bool squared = false);

/// 0.5 * [mean_p <n_p, n_NN(p,Q)> + mean_q <n_q, n_NN(q,P)>], in [-1, 1],
/// higher is better.
double normal_consistency(const SampledSurface& p, const SampledSurface& q);

/// F-score at tau centimetres (inclusive), in [0, 100]; 0 when precision
/// and recall are both zero.
double fscore(const SampledSurface& p, const SampledSurface& q, double tau_cm = 1.0);

/// Volume IoU of axis-aligned bounding boxes. Degenerate (zero-volume)
/// unions score 1 for identical boxes and 0 otherwise.
double bbox_iou(const Aabb& a, const Aabb& b);
double bbox_iou(const Mesh& a, const Mesh& b);

/// Sum over pixels foreground in either map (normal magnitude >= 1e-12) of
/// ||n_a - n_b||^2, with `count` receiving the union-foreground pixel count.
/// Background normals enter as zero vectors so silhouette mismatch counts.
double normal_map_l2_sum(const ImageBuffer& a, const ImageBuffer& b, std::size_t& count);

/// Mean of ||n_pred - n_gt||^2 over the union foreground pooled across the
/// views (both scenes rendered per view). All-background renders throw.
double l2_normal_error(const Scene& pred, const Scene& gt, const std::vector<Camera>& views);

struct ContactPrecisionResult {
  double precision = 0.0;
  bool pred_contacts_empty = false;
};

/// Fraction of predicted contact vertices (closer than delta to the other
/// predicted instance's vertices) whose nearest ground-truth vertex lies in
/// the ground-truth contact set. Both scenes must hold exactly two
/// instances; an empty predicted contact set scores 0 with the flag raised.
ContactPrecisionResult contact_precision(const Scene& pred, const Scene& gt, double delta = 0.01);

/// Peak signal-to-noise ratio in dB over 8-bit quantized values; +infinity
/// when the quantized images agree exactly. `mask` (single channel, same
/// size) restricts the pixel set and must select at least one pixel.
double psnr(const ImageBuffer& a, const ImageBuffer& b, const ImageBuffer* mask = nullptr);

/// Mean structural similarity with an 11x11 Gaussian window (sigma 1.5),
/// c1 = (0.01*255)^2, c2 = (0.03*255)^2, per channel then averaged. The
/// window renormalizes at borders; `mask` as in psnr.
double ssim(const ImageBuffer& a, const ImageBuffer& b, const ImageBuffer* mask = nullptr);

/// O^(i) = pixels another instance wins in the joint render where instance
/// i's solo render is foreground, i.e. the parts of i the others hide.
/// `solo_renders` maps instance id -> that instance rendered alone;
/// `instance_map` is the joint render's winner map.
std::map<int, ImageBuffer> occlusion_masks(const std::map<int, render::RenderOutput>& solo_renders,
                                           const ImageBuffer& instance_map);

struct InstanceMetrics {
  double cd_cm = 0.0;
  double p2s_cm = 0.0;
  double nc = 0.0;
  double fscore = 0.0;
  double bbox_iou = 0.0;
};

struct EvaluateOptions {
  std::size_t samples = 100000;
  std::uint64_t seed = 7;
  int resolution = 512;       // canonical render size when `views` is empty
  double tau_cm = 1.0;        // F-score threshold
  double contact_delta = 0.01;
  bool squared_p2s = false;
  bool chamfer_mean = false;
  /// Cameras for the image metrics, applied to the scenes as given. Empty
  /// selects the four canonical viewpoints (azimuths 0/90/180/270) over the
  /// jointly normalized pair, so both scenes share one framing.
  std::vector<Camera> views;
};

/// Sentinel conventions: psnr fields are +infinity when the compared pixels
/// agree exactly (serialized as "inf"); when no pixel anywhere is occluded
/// the occ_* fields fall back to 0 / +inf / 1 with occ_empty raised. cp is
/// only defined for two-instance scenes (cp_defined).
struct MetricReport {
  double cd_cm = 0.0;
  double p2s_cm = 0.0;
  double nc = 0.0;
  double fscore = 0.0;
  double bbox_iou = 0.0;
  double norm_l2 = 0.0;
  double cp = 0.0;
  double psnr = 0.0;
  double ssim = 0.0;
  double occ_norm_l2 = 0.0;
  double occ_psnr = 0.0;
  double occ_ssim = 0.0;

  bool cp_defined = false;
  bool pred_contacts_empty = false;
  bool occ_empty = false;

  std::map<int, InstanceMetrics> per_instance;

  std::string to_json() const;
  std::string to_csv() const;  // header row + one value row, scene level only
};

/// Full report: geometric metrics in the scenes' own units reported as
/// centimetres, image metrics over shared-framing renders, occlusion-aware
/// variants averaged over instances and viewpoints. Deterministic under
/// options.seed.
MetricReport evaluate(const Scene& pred, const Scene& gt, const EvaluateOptions& options = {});

}  // namespace hug::metrics
