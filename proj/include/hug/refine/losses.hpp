#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "hug/core/image.hpp"
#include "hug/core/mesh.hpp"
#include "hug/render/rasterizer.hpp"

namespace hug::refine {

/// Multi-view normal supervision: group targets for all six canonical views
/// and per-(view, instance) targets. Zero normal vectors mark background.
struct NormalTargets {
  std::map<int, ImageBuffer> group;                       // view -> normals
  std::map<std::pair<int, int>, ImageBuffer> instance;    // (view, instance id) -> normals

  void validate() const;  // all six group views present
};

/// Sum over views (and instances) of the per-pixel mean of 1 - <n_render,
/// n_target> over pixels foreground in both; group terms weighted
/// lambda_group, instance terms lambda_inst. Views without overlap are
/// skipped; if no view anywhere overlaps, throws.
double normal_supervision_loss(const std::map<int, render::RenderOutput>& group_renders,
                               const std::map<std::pair<int, int>, render::RenderOutput>& instance_renders,
                               const NormalTargets& targets, double lambda_group = 1.0, double lambda_inst = 0.2);

/// Ground-truth visibility for one view as winner maps: the instance and
/// part that own each pixel when every instance is rendered together,
/// 0 = background. A pixel is ground-truth-visible for (k, b) iff
/// instance[px] == k and part[px] == b.
struct GtPartVisibility {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> instance;
  std::vector<std::int32_t> part;

  void validate() const;
};

/// view index -> winner maps
using GtVisibilitySet = std::map<int, GtPartVisibility>;

/// (1/2B) sum over instances k and parts b of E/(M + eps), with E the count
/// of ground-truth-visible (k,b) pixels covered by a DIFFERENT instance in
/// the render (background does not occlude) and M the ground-truth visible
/// count. B = part vocabulary size; B = 0 throws.
double visibility_loss(const render::RenderOutput& render, const GtPartVisibility& gt,
                       const std::vector<int>& instance_ids, const std::vector<std::int32_t>& part_vocab,
                       double eps = 1e-6);

/// Per-vertex learning rates alpha_v = base_lr * sigmoid(200*d_v - 10) with
/// d_v the distance to the nearest joint, so vertices near hand/face joints
/// move slowly. `printed_form` switches to sigmoid(200*d_v + 10), the form
/// the source prints, which is near-constant for d_v >= 0.
std::vector<double> adaptive_vertex_lr(const Mesh& mesh, const std::vector<Eigen::Vector3d>& joint_positions,
                                       double base_lr, bool printed_form = false);

/// gamma_std * mean squared 2D error + gamma_vis * mean of w_j-weighted
/// squared errors, w_j = 1 for visible joints and alpha_occ otherwise.
double keypoint_loss(const std::vector<Eigen::Vector2d>& projected, const std::vector<Eigen::Vector2d>& observed,
                     const std::vector<std::uint8_t>& visibility, double gamma_std = 0.5, double gamma_vis = 0.5,
                     double alpha_occ = 0.1);

}  // namespace hug::refine
