#include "hug/diff/frozen.hpp"

#include <Eigen/Geometry>

#include <cmath>

#include "hug/core/errors.hpp"

namespace hug::diff {

namespace {
// Matches the thresholds used by compute_vertex_normals and the rasterizer so
// frozen re-evaluation reproduces the rendered values exactly.
constexpr double kDegenerateSq = 1e-16;
constexpr double kPixelNormalEps = 1e-12;
constexpr double kVarEps = 1e-20;  // smooth guard inside the std-dev sqrt
}  // namespace

SceneParam SceneParam::from_scene(const Scene& scene) {
  SceneParam p;
  p.vertex_offset.resize(scene.instances.size() + 1, 0);
  p.face_offset.resize(scene.instances.size() + 1, 0);
  for (std::size_t i = 0; i < scene.instances.size(); ++i) {
    p.vertex_offset[i + 1] = p.vertex_offset[i] + scene.instances[i].vertices.size();
    p.face_offset[i + 1] = p.face_offset[i] + scene.instances[i].faces.size();
  }
  p.positions.reserve(p.vertex_offset.back());
  p.faces.reserve(p.face_offset.back());
  for (std::size_t i = 0; i < scene.instances.size(); ++i) {
    const Mesh& m = scene.instances[i];
    int base = static_cast<int>(p.vertex_offset[i]);
    for (const auto& v : m.vertices) p.positions.push_back(v);
    for (const auto& f : m.faces) p.faces.emplace_back(f[0] + base, f[1] + base, f[2] + base);
  }
  return p;
}

void SceneParam::write_back(Scene& scene) const {
  if (vertex_offset.size() != scene.instances.size() + 1) throw InputError("SceneParam: scene shape changed");
  for (std::size_t i = 0; i < scene.instances.size(); ++i) {
    Mesh& m = scene.instances[i];
    if (m.vertices.size() != vertex_offset[i + 1] - vertex_offset[i])
      throw InputError("SceneParam: instance vertex count changed");
    for (std::size_t v = 0; v < m.vertices.size(); ++v) m.vertices[v] = positions[vertex_offset[i] + v];
  }
}

void VertexNormalChain::forward(const std::vector<Eigen::Vector3d>& positions) {
  summed_.assign(positions.size(), Eigen::Vector3d::Zero());
  for (const auto& tri : *faces_) {
    Eigen::Vector3d u = positions[tri[1]] - positions[tri[0]];
    Eigen::Vector3d w = positions[tri[2]] - positions[tri[0]];
    Eigen::Vector3d area = 0.5 * u.cross(w);
    for (int c = 0; c < 3; ++c) summed_[tri[c]] += area;
  }
  unit_.resize(positions.size());
  for (std::size_t v = 0; v < positions.size(); ++v) {
    double sq = summed_[v].squaredNorm();
    unit_[v] = sq <= kDegenerateSq ? Eigen::Vector3d::Zero() : Eigen::Vector3d(summed_[v] / std::sqrt(sq));
  }
}

void VertexNormalChain::backward(const std::vector<Eigen::Vector3d>& positions,
                                 const std::vector<Eigen::Vector3d>& grad_normals,
                                 std::vector<Eigen::Vector3d>& grad_positions) const {
  // through the normalization: dL/dm = (g - (g.n)n)/|m|, zero on the
  // degenerate branch where the forward pass pinned the normal to zero
  std::vector<Eigen::Vector3d> grad_summed(positions.size(), Eigen::Vector3d::Zero());
  for (std::size_t v = 0; v < positions.size(); ++v) {
    double sq = summed_[v].squaredNorm();
    if (sq <= kDegenerateSq) continue;
    const Eigen::Vector3d& g = grad_normals[v];
    if (g.isZero(0.0)) continue;
    grad_summed[v] = (g - g.dot(unit_[v]) * unit_[v]) / std::sqrt(sq);
  }
  // through the per-face area vectors: a = 0.5 u x w with u = p1-p0, w = p2-p0
  for (const auto& tri : *faces_) {
    Eigen::Vector3d ga = grad_summed[tri[0]] + grad_summed[tri[1]] + grad_summed[tri[2]];
    if (ga.isZero(0.0)) continue;
    Eigen::Vector3d u = positions[tri[1]] - positions[tri[0]];
    Eigen::Vector3d w = positions[tri[2]] - positions[tri[0]];
    Eigen::Vector3d gu = 0.5 * w.cross(ga);
    Eigen::Vector3d gw = 0.5 * ga.cross(u);
    grad_positions[tri[1]] += gu;
    grad_positions[tri[2]] += gw;
    grad_positions[tri[0]] -= gu + gw;
  }
}

FrozenView freeze_view(const render::RenderOutput& render, const Camera& camera, const ImageBuffer& target_normal,
                       const ImageBuffer* target_depth) {
  if (render.bary.empty()) throw InputError("freeze_view: render lacks barycentrics");
  if (target_normal.width != render.width || target_normal.height != render.height)
    throw InputError("freeze_view: target normal size mismatch");
  if (target_depth && (target_depth->width != render.width || target_depth->height != render.height))
    throw InputError("freeze_view: target depth size mismatch");

  FrozenView view;
  view.gaze = camera.gaze_frame();
  view.depth_row = camera.rotation.row(2);
  view.depth_off = camera.translation.z();
  view.use_depth = target_depth != nullptr;

  std::size_t npx = static_cast<std::size_t>(render.width) * render.height;
  for (std::size_t i = 0; i < npx; ++i) {
    if (render.face_index_map[i] < 0) continue;
    Eigen::Vector3f t(target_normal.data[i * 3], target_normal.data[i * 3 + 1], target_normal.data[i * 3 + 2]);
    if (t.isZero(0.0f)) continue;  // zero normal marks target background
    FrozenPixel px;
    px.face = render.face_index_map[i];
    for (int c = 0; c < 3; ++c) px.w[c] = render.bary[i * 3 + c];
    px.flip = render.normal_flip[i];
    px.target_normal = t.normalized();
    if (target_depth) px.target_depth = target_depth->data[i];
    view.pixels.push_back(px);
  }

  // standardize the target depth over the frozen set once; the rendered side
  // is standardized per evaluation because it moves with the vertices
  if (view.use_depth && !view.pixels.empty()) {
    double mu = 0.0;
    for (const auto& px : view.pixels) mu += px.target_depth;
    mu /= static_cast<double>(view.pixels.size());
    double var = 0.0;
    for (const auto& px : view.pixels) {
      double d = px.target_depth - mu;
      var += d * d;
    }
    var /= static_cast<double>(view.pixels.size());
    double sigma = std::sqrt(var + kVarEps);
    for (auto& px : view.pixels) px.target_depth = static_cast<float>((px.target_depth - mu) / sigma);
  }
  return view;
}

FrozenLoss::FrozenLoss(const SceneParam& param, std::vector<FrozenView> views, bool pixel_mean)
    : faces_(param.faces), views_(std::move(views)), pixel_mean_(pixel_mean) {}

bool FrozenLoss::empty() const {
  for (const auto& v : views_)
    if (!v.pixels.empty()) return false;
  return true;
}

namespace {

// One pass shared by eval and eval_with_grad so finite differences of the
// former validate the latter.
double frozen_loss_pass(const std::vector<Eigen::Vector3i>& faces, const std::vector<FrozenView>& views,
                        bool pixel_mean, const std::vector<Eigen::Vector3d>& positions,
                        std::vector<Eigen::Vector3d>* grad) {
  VertexNormalChain chain(faces);
  chain.forward(positions);
  const auto& normals = chain.normals();
  std::vector<Eigen::Vector3d> grad_normals;
  if (grad) grad_normals.assign(positions.size(), Eigen::Vector3d::Zero());

  double total = 0.0;
  for (const auto& view : views) {
    if (view.pixels.empty()) continue;
    std::size_t n = view.pixels.size();
    double norm = pixel_mean ? static_cast<double>(n) : 1.0;
    double scale = view.weight / norm;

    // depth term: standardize rendered depth over the frozen pixel set
    std::vector<double> d, dhat, r;
    double sigma = 1.0;
    if (view.use_depth) {
      d.resize(n);
      for (std::size_t k = 0; k < n; ++k) {
        const FrozenPixel& px = view.pixels[k];
        const auto& tri = faces[px.face];
        double dk = 0.0;
        for (int c = 0; c < 3; ++c)
          dk += px.w[c] * -(view.depth_row.dot(positions[tri[c]]) + view.depth_off);
        d[k] = dk;
      }
      double mu = 0.0;
      for (double v : d) mu += v;
      mu /= static_cast<double>(n);
      double var = 0.0;
      for (double v : d) var += (v - mu) * (v - mu);
      var /= static_cast<double>(n);
      sigma = std::sqrt(var + kVarEps);
      dhat.resize(n);
      r.resize(n);
      double depth_sum = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        dhat[k] = (d[k] - mu) / sigma;
        r[k] = dhat[k] - static_cast<double>(view.pixels[k].target_depth);
        depth_sum += r[k] * r[k];
      }
      total += scale * depth_sum;
    }

    // normal term: 1 - <flip * normalize(G sum_c w_c n_c), target>
    double normal_sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const FrozenPixel& px = view.pixels[k];
      const auto& tri = faces[px.face];
      Eigen::Vector3d s = Eigen::Vector3d::Zero();
      for (int c = 0; c < 3; ++c) s += static_cast<double>(px.w[c]) * normals[tri[c]];
      double len = s.norm();
      Eigen::Vector3d t = px.target_normal.cast<double>();
      if (len < kPixelNormalEps) {
        // matches the rasterizer's facing fallback; constant, no gradient
        normal_sum += 1.0 - static_cast<double>(px.flip) * Eigen::Vector3d(0, 0, -1).dot(t);
        continue;
      }
      Eigen::Vector3d shat = s / len;
      Eigen::Vector3d npx = view.gaze * shat;
      normal_sum += 1.0 - static_cast<double>(px.flip) * npx.dot(t);
      if (grad) {
        Eigen::Vector3d g_shat = view.gaze.transpose() * (-static_cast<double>(px.flip) * scale * t);
        Eigen::Vector3d g_s = (g_shat - g_shat.dot(shat) * shat) / len;
        for (int c = 0; c < 3; ++c) grad_normals[tri[c]] += static_cast<double>(px.w[c]) * g_s;
      }
    }
    total += scale * normal_sum;

    if (grad && view.use_depth) {
      // dL/dd_k = (2/sigma) [r_k - mean(r) - dhat_k mean(r.dhat)], exact under
      // the kVarEps-smoothed sigma because dhat is defined with the same sigma
      double mean_r = 0.0, mean_rd = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        mean_r += r[k];
        mean_rd += r[k] * dhat[k];
      }
      mean_r /= static_cast<double>(n);
      mean_rd /= static_cast<double>(n);
      for (std::size_t k = 0; k < n; ++k) {
        const FrozenPixel& px = view.pixels[k];
        const auto& tri = faces[px.face];
        double gd = scale * (2.0 / sigma) * (r[k] - mean_r - dhat[k] * mean_rd);
        for (int c = 0; c < 3; ++c)
          (*grad)[tri[c]] -= gd * static_cast<double>(px.w[c]) * view.depth_row;
      }
    }
  }

  if (grad) chain.backward(positions, grad_normals, *grad);
  return total;
}

}  // namespace

double FrozenLoss::eval(const std::vector<Eigen::Vector3d>& positions) const {
  return frozen_loss_pass(faces_, views_, pixel_mean_, positions, nullptr);
}

double FrozenLoss::eval_with_grad(const std::vector<Eigen::Vector3d>& positions,
                                  std::vector<Eigen::Vector3d>& grad) const {
  grad.assign(positions.size(), Eigen::Vector3d::Zero());
  return frozen_loss_pass(faces_, views_, pixel_mean_, positions, &grad);
}

double softplus_barrier(double x, double temperature) {
  double y = x / temperature;
  double sp = y > 0.0 ? y + std::log1p(std::exp(-y)) : std::log1p(std::exp(y));
  return temperature * sp;
}

double FrozenPenetration::eval(const std::vector<Eigen::Vector3d>& positions) const {
  if (witnesses_.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& wit : witnesses_) {
    if (!wit.valid) continue;
    Eigen::Vector3d q = wit.bary[0] * positions[wit.tri[0]] + wit.bary[1] * positions[wit.tri[1]] +
                        wit.bary[2] * positions[wit.tri[2]];
    double dist = wit.sign * (positions[wit.vertex] - q).norm();
    sum += softplus_barrier(tol_ - dist, temperature_);
  }
  return sum / static_cast<double>(witnesses_.size());
}

double FrozenPenetration::eval_with_grad(const std::vector<Eigen::Vector3d>& positions,
                                         std::vector<Eigen::Vector3d>& grad) const {
  grad.assign(positions.size(), Eigen::Vector3d::Zero());
  if (witnesses_.empty()) return 0.0;
  double m = static_cast<double>(witnesses_.size());

  double sum = 0.0;
  for (const auto& wit : witnesses_) {
    if (!wit.valid) continue;
    Eigen::Vector3d q = wit.bary[0] * positions[wit.tri[0]] + wit.bary[1] * positions[wit.tri[1]] +
                        wit.bary[2] * positions[wit.tri[2]];
    Eigen::Vector3d diff = positions[wit.vertex] - q;
    double rho = diff.norm();
    double dist = wit.sign * rho;
    sum += softplus_barrier(tol_ - dist, temperature_);
    if (rho < 1e-12) continue;  // barrier still counted, direction undefined
    // d/d dist of softplus_barrier(tol - dist) is -sigmoid((tol - dist)/T)
    double y = (tol_ - dist) / temperature_;
    double sig = y > 0.0 ? 1.0 / (1.0 + std::exp(-y)) : std::exp(y) / (1.0 + std::exp(y));
    double gdist = -sig / m;
    Eigen::Vector3d dir = wit.sign * diff / rho;
    grad[wit.vertex] += gdist * dir;
    for (int c = 0; c < 3; ++c) grad[wit.tri[c]] -= gdist * wit.bary[c] * dir;
  }
  return sum / m;
}

}  // namespace hug::diff
