#pragma once

#include <Eigen/Core>
#include <vector>

#include "hug/core/camera.hpp"
#include "hug/core/image.hpp"
#include "hug/core/mesh.hpp"
#include "hug/render/rasterizer.hpp"

namespace hug::diff {

/// Scene vertices flattened into one parameter vector (instances
/// concatenated in scene order). Faces are re-indexed to global vertex ids.
struct SceneParam {
  std::vector<Eigen::Vector3d> positions;
  std::vector<Eigen::Vector3i> faces;          // global vertex ids, all instances
  std::vector<std::size_t> vertex_offset;      // per instance
  std::vector<std::size_t> face_offset;        // per instance

  static SceneParam from_scene(const Scene& scene);
  void write_back(Scene& scene) const;
};

/// Area-weighted vertex normals as a differentiable map from positions to
/// world-frame unit normals. backward() accumulates dL/dpositions through the
/// normalization, the incident-face sums and the cross products.
class VertexNormalChain {
public:
  explicit VertexNormalChain(const SceneParam& param) : faces_(&param.faces) {}
  explicit VertexNormalChain(const std::vector<Eigen::Vector3i>& faces) : faces_(&faces) {}

  void forward(const std::vector<Eigen::Vector3d>& positions);
  const std::vector<Eigen::Vector3d>& normals() const { return unit_; }

  void backward(const std::vector<Eigen::Vector3d>& positions, const std::vector<Eigen::Vector3d>& grad_normals,
                std::vector<Eigen::Vector3d>& grad_positions) const;

private:
  const std::vector<Eigen::Vector3i>* faces_;
  std::vector<Eigen::Vector3d> summed_;  // unnormalized area-vector sums
  std::vector<Eigen::Vector3d> unit_;
};

/// One pixel of a frozen rasterization: the covering face, its barycentric
/// weights and the normal flip sign, all held constant through a step.
struct FrozenPixel {
  std::int32_t face = -1;  // global face id
  float w[3] = {0, 0, 0};
  float flip = 1.0f;
  Eigen::Vector3f target_normal = Eigen::Vector3f::Zero();  // gaze frame, unit
  float target_depth = 0.0f;                                // used by depth-supervised views
};

/// Frozen pixel set of one camera view. `weight` scales this view's
/// pixel-mean loss contribution.
struct FrozenView {
  Eigen::Matrix3d gaze = Eigen::Matrix3d::Identity();   // camera gaze frame
  Eigen::Vector3d depth_row = Eigen::Vector3d::Zero();  // row 2 of R: depth(v) = -(depth_row.v + depth_off)
  double depth_off = 0.0;
  double weight = 1.0;
  bool use_depth = false;  // adds the standardized-depth L2 term
  std::vector<FrozenPixel> pixels;
};

/// Builds the frozen pixel set where both the render and the target are
/// foreground (targets with zero normal count as background). Requires a
/// render made with options.barycentrics.
FrozenView freeze_view(const render::RenderOutput& render, const Camera& camera, const ImageBuffer& target_normal,
                       const ImageBuffer* target_depth = nullptr);

/// Normal-supervision (and optional affine-invariant depth) loss over frozen
/// views:
///   sum over views of weight * [ use_depth * sum_px (d^ - t^)^2
///                                + sum_px (1 - <n_px, target>) ] / norm
/// where norm = pixel count when `pixel_mean`, else 1, and d^ / t^ are the
/// per-view standardizations of rendered and target depth over the frozen
/// pixel set. Gradients flow through vertex depths, the barycentric
/// interpolation, and the vertex-normal chain; coverage, weights and flip
/// signs stay frozen, matching finite differences of eval() exactly.
class FrozenLoss {
public:
  FrozenLoss() = default;
  /// Copies the face table so the loss stays valid independently of `param`.
  FrozenLoss(const SceneParam& param, std::vector<FrozenView> views, bool pixel_mean = true);

  double eval(const std::vector<Eigen::Vector3d>& positions) const;
  /// eval() plus accumulation of dL/dpositions into grad (resized, zeroed).
  double eval_with_grad(const std::vector<Eigen::Vector3d>& positions,
                        std::vector<Eigen::Vector3d>& grad) const;

  const std::vector<FrozenView>& views() const { return views_; }
  bool empty() const;

private:
  std::vector<Eigen::Vector3i> faces_;
  std::vector<FrozenView> views_;
  bool pixel_mean_ = true;
};

/// Frozen witness of one penetration pair: the signed separation is
/// d(V) = sign * |v - sum_c bary_c * t_c| with the correspondence (vertex,
/// triangle, barycentrics, sign) held constant.
struct ContactWitness {
  int vertex = -1;   // global vertex id (query side)
  int tri[3] = {-1, -1, -1};  // global vertex ids of the closest triangle
  Eigen::Vector3d bary = Eigen::Vector3d::Zero();
  double sign = 1.0;  // -1 when the vertex sits inside the other surface
  bool valid = false;
};

/// Softplus barrier over frozen contact witnesses:
///   mean over pairs of T * ln(1 + e^{(tol - d)/T}).
/// One witness per pair; invalid witnesses contribute zero but still count
/// in the mean, matching the unfrozen loss. Empty set evaluates to 0.
class FrozenPenetration {
public:
  FrozenPenetration() = default;
  FrozenPenetration(std::vector<ContactWitness> witnesses, double tol, double temperature)
      : witnesses_(std::move(witnesses)), tol_(tol), temperature_(temperature) {}

  double eval(const std::vector<Eigen::Vector3d>& positions) const;
  double eval_with_grad(const std::vector<Eigen::Vector3d>& positions,
                        std::vector<Eigen::Vector3d>& grad) const;

private:
  std::vector<ContactWitness> witnesses_;
  double tol_ = 0.0, temperature_ = 1.0;
};

/// Numerically safe T * ln(1 + e^{x/T}).
double softplus_barrier(double x, double temperature);

}  // namespace hug::diff
