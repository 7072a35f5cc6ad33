#include "hug/refine/losses.hpp"

#include <cmath>

#include "hug/core/errors.hpp"
#include "hug/spatial/kdtree.hpp"

namespace hug::refine {

void NormalTargets::validate() const {
  for (int i = 0; i < 6; ++i)
    if (!group.count(i)) throw InputError("NormalTargets: group view " + std::to_string(i) + " missing");
  for (const auto& [key, img] : instance)
    if (key.first < 0 || key.first > 5) throw InputError("NormalTargets: instance view index out of range");
}

namespace {

/// Per-pixel mean of 1 - <render normal, target normal> over pixels
/// foreground in both; count reports the overlap size.
double view_cosine_loss(const render::RenderOutput& render, const ImageBuffer& target, std::size_t& count) {
  if (target.width != render.width || target.height != render.height)
    throw InputError("normal loss: target size does not match the render");
  if (target.channels != 3) throw InputError("normal loss: target must be a normal buffer");
  std::size_t npx = static_cast<std::size_t>(render.width) * render.height;
  double sum = 0.0;
  count = 0;
  for (std::size_t i = 0; i < npx; ++i) {
    if (render.face_index_map[i] < 0) continue;
    Eigen::Vector3d t(target.data[i * 3], target.data[i * 3 + 1], target.data[i * 3 + 2]);
    double len = t.norm();
    if (len < 1e-12) continue;  // target background
    Eigen::Vector3d n(render.normal.data[i * 3], render.normal.data[i * 3 + 1], render.normal.data[i * 3 + 2]);
    sum += 1.0 - n.dot(t / len);
    ++count;
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

}  // namespace

double normal_supervision_loss(const std::map<int, render::RenderOutput>& group_renders,
                               const std::map<std::pair<int, int>, render::RenderOutput>& instance_renders,
                               const NormalTargets& targets, double lambda_group, double lambda_inst) {
  targets.validate();
  double total = 0.0;
  std::size_t overlap_total = 0;
  for (const auto& [view, render] : group_renders) {
    auto it = targets.group.find(view);
    if (it == targets.group.end()) throw InputError("normal_supervision_loss: no group target for view");
    std::size_t count = 0;
    double mean = view_cosine_loss(render, it->second, count);
    overlap_total += count;
    if (count > 0) total += lambda_group * mean;
  }
  for (const auto& [key, render] : instance_renders) {
    auto it = targets.instance.find(key);
    if (it == targets.instance.end()) continue;  // unsupervised instance view
    std::size_t count = 0;
    double mean = view_cosine_loss(render, it->second, count);
    overlap_total += count;
    if (count > 0) total += lambda_inst * mean;
  }
  if (overlap_total == 0) throw InputError("normal_supervision_loss: no overlapping foreground in any view");
  return total;
}

void GtPartVisibility::validate() const {
  std::size_t npx = static_cast<std::size_t>(width) * height;
  if (width < 1 || height < 1) throw InputError("GtPartVisibility: non-positive size");
  if (instance.size() != npx || part.size() != npx) throw InputError("GtPartVisibility: winner map size mismatch");
}

double visibility_loss(const render::RenderOutput& render, const GtPartVisibility& gt,
                       const std::vector<int>& instance_ids, const std::vector<std::int32_t>& part_vocab,
                       double eps) {
  gt.validate();
  if (gt.width != render.width || gt.height != render.height)
    throw InputError("visibility_loss: ground truth size does not match the render");
  if (part_vocab.empty()) throw InputError("visibility_loss: empty part vocabulary (B = 0)");

  std::size_t npx = static_cast<std::size_t>(render.width) * render.height;
  double total = 0.0;
  for (int k : instance_ids)
    for (std::int32_t b : part_vocab) {
      std::size_t visible = 0, occluded = 0;
      for (std::size_t i = 0; i < npx; ++i) {
        if (gt.instance[i] != k || gt.part[i] != b) continue;
        ++visible;
        int covering = static_cast<int>(render.instance_map.data[i]);
        if (covering != 0 && covering != k) ++occluded;
      }
      total += static_cast<double>(occluded) / (static_cast<double>(visible) + eps);
    }
  return total / (2.0 * static_cast<double>(part_vocab.size()));
}

std::vector<double> adaptive_vertex_lr(const Mesh& mesh, const std::vector<Eigen::Vector3d>& joint_positions,
                                       double base_lr, bool printed_form) {
  if (joint_positions.empty()) throw InputError("adaptive_vertex_lr: joint list is empty");
  spatial::KdTree joints(joint_positions);
  std::vector<double> lr(mesh.vertices.size());
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    double d = std::sqrt(joints.nearest(mesh.vertices[v]).squared_distance);
    double x = printed_form ? 200.0 * d + 10.0 : 200.0 * d - 10.0;
    lr[v] = base_lr / (1.0 + std::exp(-x));
  }
  return lr;
}

double keypoint_loss(const std::vector<Eigen::Vector2d>& projected, const std::vector<Eigen::Vector2d>& observed,
                     const std::vector<std::uint8_t>& visibility, double gamma_std, double gamma_vis,
                     double alpha_occ) {
  if (projected.size() != observed.size() || projected.size() != visibility.size())
    throw InputError("keypoint_loss: joint list lengths differ");
  if (projected.empty()) throw InputError("keypoint_loss: empty joint lists");
  double std_sum = 0.0, vis_sum = 0.0;
  for (std::size_t j = 0; j < projected.size(); ++j) {
    double sq = (projected[j] - observed[j]).squaredNorm();
    std_sum += sq;
    vis_sum += (visibility[j] ? 1.0 : alpha_occ) * sq;
  }
  double n = static_cast<double>(projected.size());
  return gamma_std * std_sum / n + gamma_vis * vis_sum / n;
}

}  // namespace hug::refine
