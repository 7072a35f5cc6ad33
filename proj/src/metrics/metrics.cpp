#include "hug/metrics/metrics.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <random>
#include <sstream>

#include "hug/canonical/rig.hpp"
#include "hug/core/errors.hpp"
#include "hug/spatial/closest_point.hpp"
#include "hug/spatial/kdtree.hpp"

namespace hug::metrics {

using nlohmann::json;

namespace {

constexpr double kMetersToCm = 100.0;
constexpr double kFgNormalEps = 1e-12;

Mesh merge_scene(const Scene& scene) {
  Mesh merged;
  for (const auto& mesh : scene.instances) {
    int base = static_cast<int>(merged.vertices.size());
    merged.vertices.insert(merged.vertices.end(), mesh.vertices.begin(), mesh.vertices.end());
    for (const auto& f : mesh.faces) merged.faces.emplace_back(f[0] + base, f[1] + base, f[2] + base);
  }
  return merged;
}

}  // namespace

SampledSurface sample_surface(const Mesh& mesh, std::size_t n, std::uint64_t seed) {
  mesh.validate();
  if (n == 0) throw InputError("sample_surface: sample count must be positive");
  std::vector<double> cdf(mesh.faces.size(), 0.0);
  std::vector<Eigen::Vector3d> face_normals(mesh.faces.size(), Eigen::Vector3d::Zero());
  double total = 0.0;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto& face = mesh.faces[f];
    Eigen::Vector3d cross = (mesh.vertices[face[1]] - mesh.vertices[face[0]])
                                .cross(mesh.vertices[face[2]] - mesh.vertices[face[0]]);
    double area = 0.5 * cross.norm();
    if (area > 0.0) face_normals[f] = cross.normalized();
    total += area;
    cdf[f] = total;
  }
  if (total <= 0.0) throw InputError("sample_surface: mesh has no non-degenerate face");

  SampledSurface out;
  out.source_id = mesh.instance_id;
  out.points.reserve(n);
  out.normals.reserve(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    double pick = unit(rng) * total;
    std::size_t f = std::upper_bound(cdf.begin(), cdf.end(), pick) - cdf.begin();
    if (f >= cdf.size()) f = cdf.size() - 1;
    double r1 = unit(rng), r2 = unit(rng);
    double sq = std::sqrt(r1);
    double a = 1.0 - sq, b = sq * (1.0 - r2), c = sq * r2;
    const auto& face = mesh.faces[f];
    out.points.push_back(a * mesh.vertices[face[0]] + b * mesh.vertices[face[1]] + c * mesh.vertices[face[2]]);
    out.normals.push_back(face_normals[f]);
  }
  return out;
}

SampledSurface sample_surface(const Scene& scene, std::size_t n, std::uint64_t seed) {
  scene.validate();
  SampledSurface out = sample_surface(merge_scene(scene), n, seed);
  out.source_id = 0;
  return out;
}

double chamfer(const SampledSurface& p, const SampledSurface& q, bool mean_of_directions) {
  if (p.points.empty() || q.points.empty()) throw InputError("chamfer: empty sample set");
  spatial::KdTree tree_q(q.points), tree_p(p.points);
  double d_pq = 0.0, d_qp = 0.0;
  for (const auto& pt : p.points) d_pq += std::sqrt(tree_q.nearest(pt).squared_distance);
  for (const auto& pt : q.points) d_qp += std::sqrt(tree_p.nearest(pt).squared_distance);
  d_pq /= static_cast<double>(p.points.size());
  d_qp /= static_cast<double>(q.points.size());
  double sum = d_pq + d_qp;
  return kMetersToCm * (mean_of_directions ? 0.5 * sum : sum);
}

double p2s(const SampledSurface& pred, const Mesh& gt, bool squared) {
  if (pred.points.empty()) throw InputError("p2s: empty sample set");
  if (gt.faces.empty()) throw InputError("p2s: ground-truth mesh has no faces");
  spatial::TriangleBvh bvh(gt.vertices, gt.faces);
  double total = 0.0;
  for (const auto& pt : pred.points) {
    double cm = kMetersToCm * std::sqrt(bvh.closest(pt).squared_distance);
    total += squared ? cm * cm : cm;
  }
  return total / static_cast<double>(pred.points.size());
}

double normal_consistency(const SampledSurface& p, const SampledSurface& q) {
  if (p.points.empty() || q.points.empty()) throw InputError("normal_consistency: empty sample set");
  spatial::KdTree tree_q(q.points), tree_p(p.points);
  double dot_pq = 0.0, dot_qp = 0.0;
  for (std::size_t i = 0; i < p.points.size(); ++i)
    dot_pq += p.normals[i].dot(q.normals[tree_q.nearest(p.points[i]).index]);
  for (std::size_t i = 0; i < q.points.size(); ++i)
    dot_qp += q.normals[i].dot(p.normals[tree_p.nearest(q.points[i]).index]);
  dot_pq /= static_cast<double>(p.points.size());
  dot_qp /= static_cast<double>(q.points.size());
  return 0.5 * (dot_pq + dot_qp);
}

double fscore(const SampledSurface& p, const SampledSurface& q, double tau_cm) {
  if (p.points.empty() || q.points.empty()) throw InputError("fscore: empty sample set");
  if (tau_cm <= 0.0) throw InputError("fscore: tau must be positive");
  spatial::KdTree tree_q(q.points), tree_p(p.points);
  std::size_t hit_p = 0, hit_q = 0;
  for (const auto& pt : p.points)
    if (kMetersToCm * std::sqrt(tree_q.nearest(pt).squared_distance) <= tau_cm) ++hit_p;
  for (const auto& pt : q.points)
    if (kMetersToCm * std::sqrt(tree_p.nearest(pt).squared_distance) <= tau_cm) ++hit_q;
  double precision = 100.0 * hit_p / static_cast<double>(p.points.size());
  double recall = 100.0 * hit_q / static_cast<double>(q.points.size());
  if (precision + recall <= 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double bbox_iou(const Aabb& a, const Aabb& b) {
  if (a.empty || b.empty) throw InputError("bbox_iou: empty box");
  Eigen::Vector3d lo = a.min.cwiseMax(b.min);
  Eigen::Vector3d hi = a.max.cwiseMin(b.max);
  Eigen::Vector3d overlap = (hi - lo).cwiseMax(0.0);
  double inter = overlap.prod();
  double uni = a.volume() + b.volume() - inter;
  if (uni <= 0.0) return a.min == b.min && a.max == b.max ? 1.0 : 0.0;
  return inter / uni;
}

double bbox_iou(const Mesh& a, const Mesh& b) { return bbox_iou(bounding_box(a), bounding_box(b)); }

double normal_map_l2_sum(const ImageBuffer& a, const ImageBuffer& b, std::size_t& count) {
  if (!a.same_shape(b) || a.channels != 3) throw InputError("normal_map_l2_sum: need matching three-channel maps");
  count = 0;
  double sum = 0.0;
  for (int y = 0; y < a.height; ++y)
    for (int x = 0; x < a.width; ++x) {
      Eigen::Vector3d na(a.at(x, y, 0), a.at(x, y, 1), a.at(x, y, 2));
      Eigen::Vector3d nb(b.at(x, y, 0), b.at(x, y, 1), b.at(x, y, 2));
      if (na.norm() < kFgNormalEps && nb.norm() < kFgNormalEps) continue;
      sum += (na - nb).squaredNorm();
      ++count;
    }
  return sum;
}

double l2_normal_error(const Scene& pred, const Scene& gt, const std::vector<Camera>& views) {
  if (views.empty()) throw InputError("l2_normal_error: no views");
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& camera : views) {
    render::RenderOutput rp = render::rasterize(pred, camera);
    render::RenderOutput rg = render::rasterize(gt, camera);
    std::size_t view_count = 0;
    sum += normal_map_l2_sum(rp.normal, rg.normal, view_count);
    count += view_count;
  }
  if (count == 0) throw InputError("l2_normal_error: all views render background only");
  return sum / static_cast<double>(count);
}

namespace {

/// Global ids of vertices closer than delta (strict) to the other instance.
std::vector<std::uint8_t> contact_flags(const Scene& scene, double delta) {
  const Mesh& a = scene.instances[0];
  const Mesh& b = scene.instances[1];
  spatial::KdTree tree_a(a.vertices), tree_b(b.vertices);
  std::vector<std::uint8_t> flags(a.vertices.size() + b.vertices.size(), 0);
  for (std::size_t v = 0; v < a.vertices.size(); ++v)
    if (std::sqrt(tree_b.nearest(a.vertices[v]).squared_distance) < delta) flags[v] = 1;
  for (std::size_t v = 0; v < b.vertices.size(); ++v)
    if (std::sqrt(tree_a.nearest(b.vertices[v]).squared_distance) < delta) flags[a.vertices.size() + v] = 1;
  return flags;
}

}  // namespace

ContactPrecisionResult contact_precision(const Scene& pred, const Scene& gt, double delta) {
  if (pred.instances.size() != 2 || gt.instances.size() != 2)
    throw InputError("contact_precision: both scenes need exactly two instances");
  if (delta <= 0.0) throw InputError("contact_precision: delta must be positive");

  std::vector<std::uint8_t> pred_contact = contact_flags(pred, delta);
  std::vector<std::uint8_t> gt_contact = contact_flags(gt, delta);

  std::vector<Eigen::Vector3d> pred_all = pred.instances[0].vertices;
  pred_all.insert(pred_all.end(), pred.instances[1].vertices.begin(), pred.instances[1].vertices.end());
  std::vector<Eigen::Vector3d> gt_all = gt.instances[0].vertices;
  gt_all.insert(gt_all.end(), gt.instances[1].vertices.begin(), gt.instances[1].vertices.end());

  spatial::KdTree gt_tree(gt_all);
  std::size_t contacts = 0, correct = 0;
  for (std::size_t v = 0; v < pred_all.size(); ++v) {
    if (!pred_contact[v]) continue;
    ++contacts;
    if (gt_contact[gt_tree.nearest(pred_all[v]).index]) ++correct;
  }
  if (contacts == 0) return {0.0, true};
  return {static_cast<double>(correct) / static_cast<double>(contacts), false};
}

namespace {

double quantize8(float v) { return static_cast<double>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f)); }

void check_image_pair(const ImageBuffer& a, const ImageBuffer& b, const ImageBuffer* mask, const char* op) {
  if (!a.same_shape(b)) throw InputError(std::string(op) + ": image shape mismatch");
  if (a.width <= 0 || a.height <= 0) throw InputError(std::string(op) + ": empty images");
  if (mask) {
    if (mask->width != a.width || mask->height != a.height || mask->channels != 1)
      throw InputError(std::string(op) + ": mask shape mismatch");
  }
}

/// Squared 8-bit error accumulator shared by psnr and the pooled evaluate
/// variants.
struct SseAccum {
  double sse = 0.0;
  std::size_t values = 0;

  void add(const ImageBuffer& a, const ImageBuffer& b, const ImageBuffer* mask) {
    for (int y = 0; y < a.height; ++y)
      for (int x = 0; x < a.width; ++x) {
        if (mask && mask->at(x, y) == 0.0f) continue;
        for (int c = 0; c < a.channels; ++c) {
          double d = quantize8(a.at(x, y, c)) - quantize8(b.at(x, y, c));
          sse += d * d;
        }
        values += a.channels;
      }
  }

  double psnr() const {
    if (values == 0) throw InputError("psnr: no pixels selected");
    double mse = sse / static_cast<double>(values);
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / mse);
  }
};

constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;
constexpr double kSsimC1 = (0.01 * 255.0) * (0.01 * 255.0);
constexpr double kSsimC2 = (0.03 * 255.0) * (0.03 * 255.0);

/// Gaussian-weighted local mean, window renormalized where it overhangs the
/// border; separable, which matches the truncated 2D kernel exactly.
std::vector<double> gaussian_blur(const std::vector<double>& f, int w, int h) {
  static const std::vector<double> kernel = [] {
    std::vector<double> k(kSsimWindow);
    int r = kSsimWindow / 2;
    for (int i = 0; i < kSsimWindow; ++i) k[i] = std::exp(-0.5 * (i - r) * (i - r) / (kSsimSigma * kSsimSigma));
    return k;
  }();
  int r = kSsimWindow / 2;
  std::vector<double> tmp(f.size(), 0.0), out(f.size(), 0.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0, wsum = 0.0;
      for (int k = -r; k <= r; ++k) {
        int xx = x + k;
        if (xx < 0 || xx >= w) continue;
        acc += kernel[k + r] * f[static_cast<std::size_t>(y) * w + xx];
        wsum += kernel[k + r];
      }
      tmp[static_cast<std::size_t>(y) * w + x] = acc / wsum;
    }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0, wsum = 0.0;
      for (int k = -r; k <= r; ++k) {
        int yy = y + k;
        if (yy < 0 || yy >= h) continue;
        acc += kernel[k + r] * tmp[static_cast<std::size_t>(yy) * w + x];
        wsum += kernel[k + r];
      }
      out[static_cast<std::size_t>(y) * w + x] = acc / wsum;
    }
  return out;
}

}  // namespace

double psnr(const ImageBuffer& a, const ImageBuffer& b, const ImageBuffer* mask) {
  check_image_pair(a, b, mask, "psnr");
  SseAccum accum;
  accum.add(a, b, mask);
  return accum.psnr();
}

double ssim(const ImageBuffer& a, const ImageBuffer& b, const ImageBuffer* mask) {
  check_image_pair(a, b, mask, "ssim");
  int w = a.width, h = a.height;
  std::size_t pixels = a.pixel_count();
  double total = 0.0;
  for (int c = 0; c < a.channels; ++c) {
    std::vector<double> fa(pixels), fb(pixels), faa(pixels), fbb(pixels), fab(pixels);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        std::size_t i = static_cast<std::size_t>(y) * w + x;
        double va = a.at(x, y, c) * 255.0, vb = b.at(x, y, c) * 255.0;
        fa[i] = va;
        fb[i] = vb;
        faa[i] = va * va;
        fbb[i] = vb * vb;
        fab[i] = va * vb;
      }
    std::vector<double> ma = gaussian_blur(fa, w, h), mb = gaussian_blur(fb, w, h);
    std::vector<double> maa = gaussian_blur(faa, w, h), mbb = gaussian_blur(fbb, w, h);
    std::vector<double> mab = gaussian_blur(fab, w, h);
    double acc = 0.0;
    std::size_t count = 0;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        if (mask && mask->at(x, y) == 0.0f) continue;
        std::size_t i = static_cast<std::size_t>(y) * w + x;
        double var_a = std::max(0.0, maa[i] - ma[i] * ma[i]);
        double var_b = std::max(0.0, mbb[i] - mb[i] * mb[i]);
        double cov = mab[i] - ma[i] * mb[i];
        double value = ((2.0 * ma[i] * mb[i] + kSsimC1) * (2.0 * cov + kSsimC2)) /
                       ((ma[i] * ma[i] + mb[i] * mb[i] + kSsimC1) * (var_a + var_b + kSsimC2));
        acc += value;
        ++count;
      }
    if (count == 0) throw InputError("ssim: no pixels selected");
    total += acc / static_cast<double>(count);
  }
  return total / a.channels;
}

std::map<int, ImageBuffer> occlusion_masks(const std::map<int, render::RenderOutput>& solo_renders,
                                           const ImageBuffer& instance_map) {
  std::map<int, ImageBuffer> out;
  for (const auto& [id, solo] : solo_renders) {
    if (solo.width != instance_map.width || solo.height != instance_map.height)
      throw InputError("occlusion_masks: render size mismatch");
    ImageBuffer mask(instance_map.width, instance_map.height, Semantic::Mask);
    for (int y = 0; y < mask.height; ++y)
      for (int x = 0; x < mask.width; ++x) {
        int winner = static_cast<int>(std::lround(instance_map.at(x, y)));
        bool solo_fg = solo.face_index_map[static_cast<std::size_t>(y) * mask.width + x] >= 0;
        mask.at(x, y) = (solo_fg && winner != 0 && winner != id) ? 1.0f : 0.0f;
      }
    out.emplace(id, std::move(mask));
  }
  return out;
}

namespace {

Scene normalized_copy(const Scene& scene, const Eigen::Vector3d& center, double scale) {
  Scene out = scene;
  for (auto& mesh : out.instances)
    for (auto& v : mesh.vertices) v = (v - center) / (scale / 2.0);
  return out;
}

std::string finite_or_inf(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream out;
  out.precision(12);
  out << v;
  return out.str();
}

json json_number(double v) {
  if (std::isinf(v)) return json("inf");
  return json(v);
}

}  // namespace

std::string MetricReport::to_json() const {
  json j;
  j["cd_cm"] = json_number(cd_cm);
  j["p2s_cm"] = json_number(p2s_cm);
  j["nc"] = json_number(nc);
  j["fscore"] = json_number(fscore);
  j["bbox_iou"] = json_number(bbox_iou);
  j["norm_l2"] = json_number(norm_l2);
  j["cp"] = json_number(cp);
  j["psnr"] = json_number(psnr);
  j["ssim"] = json_number(ssim);
  j["occ_norm_l2"] = json_number(occ_norm_l2);
  j["occ_psnr"] = json_number(occ_psnr);
  j["occ_ssim"] = json_number(occ_ssim);
  j["cp_defined"] = cp_defined;
  j["pred_contacts_empty"] = pred_contacts_empty;
  j["occ_empty"] = occ_empty;
  json inst = json::object();
  for (const auto& [id, m] : per_instance) {
    json row;
    row["cd_cm"] = json_number(m.cd_cm);
    row["p2s_cm"] = json_number(m.p2s_cm);
    row["nc"] = json_number(m.nc);
    row["fscore"] = json_number(m.fscore);
    row["bbox_iou"] = json_number(m.bbox_iou);
    inst[std::to_string(id)] = row;
  }
  j["per_instance"] = inst;
  return j.dump(2) + "\n";
}

std::string MetricReport::to_csv() const {
  std::ostringstream out;
  out << "cd_cm,p2s_cm,nc,fscore,bbox_iou,norm_l2,cp,psnr,ssim,occ_norm_l2,occ_psnr,occ_ssim\n";
  out << finite_or_inf(cd_cm) << ',' << finite_or_inf(p2s_cm) << ',' << finite_or_inf(nc) << ','
      << finite_or_inf(fscore) << ',' << finite_or_inf(bbox_iou) << ',' << finite_or_inf(norm_l2) << ','
      << finite_or_inf(cp) << ',' << finite_or_inf(psnr) << ',' << finite_or_inf(ssim) << ','
      << finite_or_inf(occ_norm_l2) << ',' << finite_or_inf(occ_psnr) << ',' << finite_or_inf(occ_ssim) << '\n';
  return out.str();
}

MetricReport evaluate(const Scene& pred, const Scene& gt, const EvaluateOptions& options) {
  pred.validate();
  gt.validate();
  if (options.samples == 0) throw InputError("evaluate: samples must be positive");
  MetricReport report;

  // geometric metrics in the input frame; shared seed keeps the identity
  // scene exact
  SampledSurface sp = sample_surface(pred, options.samples, options.seed);
  SampledSurface sg = sample_surface(gt, options.samples, options.seed);
  Mesh gt_merged = merge_scene(gt);
  report.cd_cm = chamfer(sp, sg, options.chamfer_mean);
  report.p2s_cm = p2s(sp, gt_merged, options.squared_p2s);
  report.nc = normal_consistency(sp, sg);
  report.fscore = fscore(sp, sg, options.tau_cm);
  report.bbox_iou = bbox_iou(bounding_box(pred), bounding_box(gt));

  if (pred.instances.size() == 2 && gt.instances.size() == 2) {
    report.cp_defined = true;
    ContactPrecisionResult cp = contact_precision(pred, gt, options.contact_delta);
    report.cp = cp.precision;
    report.pred_contacts_empty = cp.pred_contacts_empty;
  }

  for (const auto& mesh : pred.instances) {
    const Mesh* other = gt.find_instance(mesh.instance_id);
    if (!other) continue;
    std::uint64_t inst_seed = options.seed + static_cast<std::uint64_t>(mesh.instance_id);
    SampledSurface ip = sample_surface(mesh, options.samples, inst_seed);
    SampledSurface ig = sample_surface(*other, options.samples, inst_seed);
    InstanceMetrics m;
    m.cd_cm = chamfer(ip, ig, options.chamfer_mean);
    m.p2s_cm = p2s(ip, *other, options.squared_p2s);
    m.nc = normal_consistency(ip, ig);
    m.fscore = fscore(ip, ig, options.tau_cm);
    m.bbox_iou = bbox_iou(mesh, *other);
    report.per_instance.emplace(mesh.instance_id, m);
  }

  // image metrics: both scenes rendered with one shared framing
  Scene pred_view = pred, gt_view = gt;
  std::vector<Camera> cameras = options.views;
  if (cameras.empty()) {
    Aabb box = bounding_box(pred);
    box.expand(bounding_box(gt));
    double extent = box.extent().maxCoeff();
    if (extent <= 0.0) throw InputError("evaluate: degenerate joint bounding box");
    Eigen::Vector3d center = box.center();
    double scale = extent * 1.05;
    pred_view = normalized_copy(pred, center, scale);
    gt_view = normalized_copy(gt, center, scale);
    canonical::CanonicalRig rig = canonical::build_rig(3.0, options.resolution);
    for (double azimuth : {0.0, 90.0, 180.0, 270.0})
      cameras.push_back(rig.cameras[canonical::CanonicalRig::view_index(azimuth)]);
  }

  render::RasterizeOptions ropts;
  ropts.rgb = true;

  double norm_sum = 0.0;
  std::size_t norm_count = 0;
  SseAccum rgb_sse;
  double ssim_sum = 0.0;
  double occ_norm_sum = 0.0;
  std::size_t occ_norm_count = 0;
  SseAccum occ_sse;
  double occ_ssim_sum = 0.0;
  std::size_t occ_ssim_count = 0;

  for (const auto& camera : cameras) {
    render::RenderOutput rp = render::rasterize(pred_view, camera, ropts);
    render::RenderOutput rg = render::rasterize(gt_view, camera, ropts);

    std::size_t view_count = 0;
    norm_sum += normal_map_l2_sum(rp.normal, rg.normal, view_count);
    norm_count += view_count;
    rgb_sse.add(*rp.rgb, *rg.rgb, nullptr);
    ssim_sum += ssim(*rp.rgb, *rg.rgb, nullptr);

    if (gt_view.instances.size() < 2) continue;
    std::map<int, render::RenderOutput> solos;
    for (const auto& mesh : gt_view.instances) {
      Scene solo;
      solo.instances.push_back(mesh);
      solos.emplace(mesh.instance_id, render::rasterize(solo, camera));
    }
    for (const auto& [id, mask] : occlusion_masks(solos, rg.instance_map)) {
      if (mask_coverage(mask) == 0.0) continue;
      // every O pixel counts; background normals enter as zero vectors
      for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x) {
          if (mask.at(x, y) == 0.0f) continue;
          Eigen::Vector3d na(rp.normal.at(x, y, 0), rp.normal.at(x, y, 1), rp.normal.at(x, y, 2));
          Eigen::Vector3d nb(rg.normal.at(x, y, 0), rg.normal.at(x, y, 1), rg.normal.at(x, y, 2));
          occ_norm_sum += (na - nb).squaredNorm();
          ++occ_norm_count;
        }
      occ_sse.add(*rp.rgb, *rg.rgb, &mask);
      occ_ssim_sum += ssim(*rp.rgb, *rg.rgb, &mask);
      ++occ_ssim_count;
    }
  }

  if (norm_count == 0) throw InputError("evaluate: all views render background only");
  report.norm_l2 = norm_sum / static_cast<double>(norm_count);
  report.psnr = rgb_sse.psnr();
  report.ssim = ssim_sum / static_cast<double>(cameras.size());

  if (occ_norm_count == 0) {
    report.occ_empty = true;
    report.occ_norm_l2 = 0.0;
    report.occ_psnr = std::numeric_limits<double>::infinity();
    report.occ_ssim = 1.0;
  } else {
    report.occ_norm_l2 = occ_norm_sum / static_cast<double>(occ_norm_count);
    report.occ_psnr = occ_sse.psnr();
    report.occ_ssim = occ_ssim_sum / static_cast<double>(occ_ssim_count);
  }
  return report;
}

}  // namespace hug::metrics
