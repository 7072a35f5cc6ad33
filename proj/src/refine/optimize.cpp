#include "hug/refine/optimize.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "hug/core/errors.hpp"
#include "hug/io/atomic_file.hpp"
#include "hug/opt/adam.hpp"
#include "hug/render/rasterizer.hpp"

namespace hug::refine {

using nlohmann::json;

void OptimizationConfig::validate() const {
  if (lambda_group < 0.0 || lambda_inst < 0.0 || lambda_pen < 0.0 || lambda_vis < 0.0)
    throw InputError("OptimizationConfig: weights must be non-negative");
  if (tol <= 0.0) throw InputError("OptimizationConfig: tol must be positive");
  if (iters < 1) throw InputError("OptimizationConfig: iters must be >= 1");
  if (base_lr <= 0.0) throw InputError("OptimizationConfig: base_lr must be positive");
}

OptimizationConfig config_from_json(const std::string& text) {
  json j = json::parse(text);
  OptimizationConfig c;
  c.lambda_group = j.value("lambda_group", c.lambda_group);
  c.lambda_inst = j.value("lambda_inst", c.lambda_inst);
  c.lambda_pen = j.value("lambda_pen", c.lambda_pen);
  c.lambda_vis = j.value("lambda_vis", c.lambda_vis);
  c.tol = j.value("tol", c.tol);
  c.iters = j.value("iters", c.iters);
  c.base_lr = j.value("base_lr", c.base_lr);
  c.validate();
  return c;
}

std::string config_to_json(const OptimizationConfig& c) {
  json j;
  j["lambda_group"] = c.lambda_group;
  j["lambda_inst"] = c.lambda_inst;
  j["lambda_pen"] = c.lambda_pen;
  j["lambda_vis"] = c.lambda_vis;
  j["tol"] = c.tol;
  j["iters"] = c.iters;
  j["base_lr"] = c.base_lr;
  return j.dump(2) + "\n";
}

OptimizationConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("load_config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

std::string LossTrace::to_csv() const {
  std::ostringstream out;
  out << "iteration,L_normal,L_vis,L_pen,L_total\n";
  out.precision(12);
  for (const auto& row : rows)
    out << row.iteration << ',' << row.normal << ',' << row.vis << ',' << row.pen << ',' << row.total << '\n';
  return out.str();
}

void LossTrace::save_csv(const std::string& path) const { io::atomic_write_text(path, to_csv()); }

LossRow FrozenTotal::eval_terms(const std::vector<Eigen::Vector3d>& positions) const {
  LossRow row;
  row.normal = normal_.eval(positions);
  row.vis = vis_raw_;
  row.pen = pen_.eval(positions);
  row.total = row.normal + lambda_vis_ * row.vis + lambda_pen_ * row.pen;
  return row;
}

LossRow FrozenTotal::eval_terms_grad(const std::vector<Eigen::Vector3d>& positions,
                                     std::vector<Eigen::Vector3d>& grad) const {
  LossRow row;
  std::vector<Eigen::Vector3d> pen_grad;
  row.normal = normal_.eval_with_grad(positions, grad);
  row.pen = pen_.eval_with_grad(positions, pen_grad);
  row.vis = vis_raw_;
  row.total = row.normal + lambda_vis_ * row.vis + lambda_pen_ * row.pen;
  for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += lambda_pen_ * pen_grad[i];
  return row;
}

FrozenTotal freeze_total_loss(const Scene& scene, const diff::SceneParam& param, const NormalTargets& targets,
                              const GtVisibilitySet& gt_visibility, const PartPairSet& pairs,
                              const OptimizationConfig& config, const canonical::CanonicalRig& rig) {
  targets.validate();
  pairs.validate();

  render::RasterizeOptions opts;
  opts.barycentrics = true;
  opts.parts = !gt_visibility.empty();

  std::vector<int> instance_ids;
  for (const auto& mesh : scene.instances) instance_ids.push_back(mesh.instance_id);
  std::vector<std::int32_t> part_vocab = part_vocabulary(scene);

  std::vector<diff::FrozenView> views;
  double vis_raw = 0.0;
  std::size_t overlap = 0;

  for (int i = 0; i < canonical::CanonicalRig::kViews; ++i) {
    const Camera& camera = rig.cameras[i];
    render::RenderOutput group = render::rasterize(scene, camera, opts);

    diff::FrozenView fv = diff::freeze_view(group, camera, targets.group.at(i));
    fv.weight = config.lambda_group;
    overlap += fv.pixels.size();
    if (config.lambda_group > 0.0 && !fv.pixels.empty()) views.push_back(std::move(fv));

    auto gt = gt_visibility.find(i);
    if (gt != gt_visibility.end()) vis_raw += visibility_loss(group, gt->second, instance_ids, part_vocab);

    if (config.lambda_inst > 0.0) {
      for (std::size_t k = 0; k < scene.instances.size(); ++k) {
        auto target = targets.instance.find({i, scene.instances[k].instance_id});
        if (target == targets.instance.end()) continue;
        Scene solo;
        solo.instances.push_back(scene.instances[k]);
        render::RenderOutput inst = render::rasterize(solo, camera, opts);
        diff::FrozenView iv = diff::freeze_view(inst, camera, target->second);
        iv.weight = config.lambda_inst;
        // solo renders index faces locally; lift them to scene-global ids
        std::int32_t base = static_cast<std::int32_t>(param.face_offset[k]);
        for (auto& px : iv.pixels) px.face += base;
        overlap += iv.pixels.size();
        if (!iv.pixels.empty()) views.push_back(std::move(iv));
      }
    }
  }
  if (overlap == 0) throw InputError("freeze_total_loss: no overlapping foreground in any view");

  diff::FrozenPenetration pen;
  if (config.lambda_pen > 0.0 && !pairs.empty()) {
    // every vertex violating the margin gets its own witness; the argmin
    // vertex alone would absorb the whole push and destabilize the step
    std::vector<diff::ContactWitness> witnesses = contact_witnesses(scene, param, pairs, config.tol);
    pen = diff::FrozenPenetration(std::move(witnesses), config.tol, penetration_temperature(config.tol));
  }

  diff::FrozenLoss normal(param, std::move(views), /*pixel_mean=*/true);
  return FrozenTotal(std::move(normal), std::move(pen), config.lambda_vis, vis_raw, config.lambda_pen);
}

namespace {

void check_finite(const LossRow& row, int iteration) {
  auto bad = [](double v) { return !std::isfinite(v); };
  const char* term = nullptr;
  if (bad(row.normal)) term = "L_normal";
  else if (bad(row.vis)) term = "L_vis";
  else if (bad(row.pen)) term = "L_pen";
  else if (bad(row.total)) term = "L_total";
  if (term)
    throw NumericalError("optimize: non-finite " + std::string(term) + " at iteration " + std::to_string(iteration));
}

}  // namespace

OptimizeResult optimize(const Scene& scene, const NormalTargets& targets, const GtVisibilitySet& gt_visibility,
                        const PartPairSet& pairs, const OptimizationConfig& config,
                        const canonical::CanonicalRig& rig, const std::vector<Eigen::Vector3d>& joint_positions,
                        const IterationObserver& observer) {
  scene.validate();
  config.validate();

  OptimizeResult result;
  result.scene = scene;
  diff::SceneParam param = diff::SceneParam::from_scene(scene);

  // per-vertex learning-rate scales; adaptive_vertex_lr with base 1 yields
  // the bare sigmoid factors
  std::vector<double> lr_scale;
  if (!joint_positions.empty()) {
    lr_scale.reserve(param.positions.size());
    for (const auto& mesh : result.scene.instances) {
      std::vector<double> scales = adaptive_vertex_lr(mesh, joint_positions, 1.0);
      lr_scale.insert(lr_scale.end(), scales.begin(), scales.end());
    }
  }

  opt::Adam adam(param.positions.size());
  std::vector<Eigen::Vector3d> grad;
  std::vector<Eigen::Vector3d> best = param.positions;
  double best_total = std::numeric_limits<double>::infinity();

  for (int it = 0; it < config.iters; ++it) {
    param.write_back(result.scene);
    FrozenTotal frozen = freeze_total_loss(result.scene, param, targets, gt_visibility, pairs, config, rig);
    LossRow row = frozen.eval_terms_grad(param.positions, grad);
    row.iteration = it;
    check_finite(row, it);
    result.trace.rows.push_back(row);
    if (observer) observer(it, result.scene, row);
    if (row.total < best_total) {
      best_total = row.total;
      best = param.positions;
    }
    // numerical-noise floor: stepping on pure quantization gradients would
    // only push Adam into a random walk
    if (row.total <= 1e-9) break;

    adam.step(param.positions, grad, config.base_lr, lr_scale.empty() ? nullptr : &lr_scale);
    bool finite = true;
    for (const auto& p : param.positions) finite = finite && p.allFinite();
    if (!finite) break;  // keep the best finite iterate
  }

  // evaluate the post-step state, then report the returned geometry's loss
  // as the final row so the trace ends at the scene the caller receives
  param.write_back(result.scene);
  {
    FrozenTotal frozen = freeze_total_loss(result.scene, param, targets, gt_visibility, pairs, config, rig);
    LossRow row = frozen.eval_terms(param.positions);
    if (std::isfinite(row.total) && row.total < best_total) {
      best_total = row.total;
      best = param.positions;
    }
  }
  param.positions = best;
  param.write_back(result.scene);
  {
    FrozenTotal frozen = freeze_total_loss(result.scene, param, targets, gt_visibility, pairs, config, rig);
    LossRow row = frozen.eval_terms(param.positions);
    row.iteration = static_cast<int>(result.trace.rows.size());
    check_finite(row, row.iteration);
    result.trace.rows.push_back(row);
  }
  return result;
}

}  // namespace hug::refine
