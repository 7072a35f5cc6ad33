#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hug/canonical/rig.hpp"
#include "hug/core/mesh.hpp"
#include "hug/diff/frozen.hpp"
#include "hug/refine/contact.hpp"
#include "hug/refine/losses.hpp"

namespace hug::refine {

struct OptimizationConfig {
  double lambda_group = 1.0;
  double lambda_inst = 0.2;
  double lambda_pen = 30.0;  // the paper also quotes 2.0; override via config
  double lambda_vis = 1.0;
  double tol = 5e-4;  // meters
  int iters = 200;
  double base_lr = 0.01;

  void validate() const;
};

OptimizationConfig config_from_json(const std::string& text);
std::string config_to_json(const OptimizationConfig& config);
OptimizationConfig load_config(const std::string& path);

struct LossRow {
  int iteration = 0;
  double normal = 0.0;  // weighted group+instance cosine term (Eq. 9's L_normal)
  double vis = 0.0;     // raw visibility term
  double pen = 0.0;     // raw penetration term
  double total = 0.0;   // normal + lambda_vis*vis + lambda_pen*pen
};

struct LossTrace {
  std::vector<LossRow> rows;

  std::string to_csv() const;  // header: iteration,L_normal,L_vis,L_pen,L_total
  void save_csv(const std::string& path) const;
};

/// The total objective with rasterization coverage, visibility counts and
/// contact correspondences all frozen at one scene state. eval() is a pure
/// function of the vertex positions, so central finite differences of it
/// validate the analytic gradient exactly. The visibility term is constant
/// under frozen coverage (its gradient is zero by construction).
class FrozenTotal {
public:
  FrozenTotal() = default;
  FrozenTotal(diff::FrozenLoss normal, diff::FrozenPenetration pen, double lambda_vis, double vis_raw,
              double lambda_pen)
      : normal_(std::move(normal)), pen_(std::move(pen)), lambda_vis_(lambda_vis), vis_raw_(vis_raw),
        lambda_pen_(lambda_pen) {}

  LossRow eval_terms(const std::vector<Eigen::Vector3d>& positions) const;
  LossRow eval_terms_grad(const std::vector<Eigen::Vector3d>& positions, std::vector<Eigen::Vector3d>& grad) const;
  double eval(const std::vector<Eigen::Vector3d>& positions) const { return eval_terms(positions).total; }
  bool has_normal_signal() const { return !normal_.empty(); }

private:
  diff::FrozenLoss normal_;
  diff::FrozenPenetration pen_;
  double lambda_vis_ = 0.0;
  double vis_raw_ = 0.0;
  double lambda_pen_ = 0.0;
};

/// Renders the scene from all six rig views (plus per-instance solo renders
/// when lambda_inst > 0), freezes the pixel sets against the targets,
/// accumulates the visibility term over the views present in gt_visibility,
/// and freezes one contact witness per pair. Throws when no view has
/// overlapping foreground.
FrozenTotal freeze_total_loss(const Scene& scene, const diff::SceneParam& param, const NormalTargets& targets,
                              const GtVisibilitySet& gt_visibility, const PartPairSet& pairs,
                              const OptimizationConfig& config, const canonical::CanonicalRig& rig);

struct OptimizeResult {
  Scene scene;
  LossTrace trace;  // rows 0..iters-1 are the live sequence; the last row
                    // reports the returned (lowest-loss) geometry
};

/// Called once per live iteration with the scene state the row measured.
using IterationObserver = std::function<void(int iteration, const Scene& scene, const LossRow& row)>;

/// Adam over all instance vertices jointly, coverage re-frozen every
/// iteration, per-vertex learning-rate scales from adaptive_vertex_lr when
/// joints are given. Returns the iterate with the lowest recorded total
/// loss. Throws NumericalError naming the offending term if any loss goes
/// non-finite.
OptimizeResult optimize(const Scene& scene, const NormalTargets& targets, const GtVisibilitySet& gt_visibility,
                        const PartPairSet& pairs, const OptimizationConfig& config,
                        const canonical::CanonicalRig& rig,
                        const std::vector<Eigen::Vector3d>& joint_positions = {},
                        const IterationObserver& observer = {});

}  // namespace hug::refine
