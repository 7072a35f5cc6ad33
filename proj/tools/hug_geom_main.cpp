// Pipeline driver: wires file inputs through the pers2ortho, refine,
// texture and metrics modules, plus standalone rendering, latent
// composition and rig emission. One JSON config per subcommand, flags win
// over config values. Exit codes: 0 success, 2 input error, 3 numerical
// failure, 4 internal invariant violation.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <string>
#include <vector>

#include "hug/canonical/rig.hpp"
#include "hug/core/errors.hpp"
#include "hug/fixture/fixture.hpp"
#include "hug/io/atomic_file.hpp"
#include "hug/io/image_io.hpp"
#include "hug/io/mesh_io.hpp"
#include "hug/latent/latent_ops.hpp"
#include "hug/metrics/metrics.hpp"
#include "hug/pers2ortho/pers2ortho.hpp"
#include "hug/refine/losses.hpp"
#include "hug/refine/optimize.hpp"
#include "hug/render/rasterizer.hpp"
#include "hug/texture/fusion.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hug;

namespace {

json load_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return j;
}

void require_exists(const fs::path& path, const char* what) {
  if (!fs::exists(path)) throw InputError(std::string("missing ") + what + ": " + path.string());
}

Mesh load_mesh(const fs::path& path) {
  require_exists(path, "mesh");
  std::string ext = path.extension().string();
  if (ext == ".ply") return io::read_ply(path);
  if (ext == ".obj") return io::read_obj(path);
  throw InputError("unsupported mesh format: " + path.string());
}

/// Instances are numbered 1..N in listed order.
Scene load_scene(const std::vector<std::string>& paths) {
  if (paths.empty()) throw InputError("no mesh paths given");
  Scene scene;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    Mesh mesh = load_mesh(paths[i]);
    mesh.instance_id = static_cast<int>(i) + 1;
    scene.instances.push_back(std::move(mesh));
  }
  scene.validate();
  return scene;
}

void atomic_png(const fs::path& path, const ImageBuffer& image) {
  io::atomic_write(path, [&](const fs::path& tmp) { io::write_png(tmp, image); });
}

void atomic_pfm(const fs::path& path, const ImageBuffer& image) {
  io::atomic_write(path, [&](const fs::path& tmp) { io::write_pfm(tmp, image); });
}

void atomic_ply(const fs::path& path, const Mesh& mesh) {
  io::atomic_write(path, [&](const fs::path& tmp) { io::write_ply(tmp, mesh); });
}

std::string view_dir_name(double azimuth) {
  char name[32];
  std::snprintf(name, sizeof name, "view_%03d", static_cast<int>(azimuth));
  return name;
}

/// Config JSON fills every value the user did not pass as a flag.
struct ConfigOverlay {
  const CLI::App* app;
  json cfg;

  template <class T>
  void fill(const std::string& flag, const char* key, T& value) const {
    if (app->count(flag) > 0) return;  // flags win
    if (!cfg.contains(key)) return;
    try {
      value = cfg.at(key).get<T>();
    } catch (const json::exception& e) {
      throw InputError(std::string("config field '") + key + "': " + e.what());
    }
  }
};

ConfigOverlay overlay(const CLI::App* app, const std::string& config_path) {
  ConfigOverlay o;
  o.app = app;
  if (!config_path.empty()) o.cfg = load_json_file(config_path);
  else o.cfg = json::object();
  return o;
}

std::vector<Eigen::Vector3d> load_joints(const fs::path& path) {
  json j = load_json_file(path);
  if (!j.contains("joints") || !j.at("joints").is_array()) throw InputError("joints file needs a 'joints' array");
  std::vector<Eigen::Vector3d> joints;
  for (const auto& row : j.at("joints")) {
    if (!row.is_array() || row.size() != 3) throw InputError("joint rows must be [x, y, z]");
    joints.emplace_back(row[0].get<double>(), row[1].get<double>(), row[2].get<double>());
  }
  return joints;
}

// ---------------------------------------------------------------- rig

struct RigArgs {
  std::string out = "rig.json";
  int resolution = 768;
  double distance = 3.0;
  std::string config;
};

void run_rig(const CLI::App* app, const RigArgs& args_in) {
  RigArgs args = args_in;
  ConfigOverlay o = overlay(app, args.config);
  o.fill("--out", "out", args.out);
  o.fill("--resolution", "resolution", args.resolution);
  o.fill("--distance", "distance", args.distance);

  canonical::CanonicalRig rig = canonical::build_rig(args.distance, args.resolution);
  canonical::save_rig(rig, args.out);
  std::cout << "wrote " << args.out << " (" << canonical::CanonicalRig::kViews << " views, " << args.resolution
            << "px)\n";
}

// ---------------------------------------------------------------- render

struct RenderArgs {
  std::vector<std::string> meshes;
  std::string rig = "rig.json";
  std::string out_dir = "out";
  std::vector<double> azimuths;
  std::string config;
};

void run_render(const CLI::App* app, const RenderArgs& args_in) {
  RenderArgs args = args_in;
  ConfigOverlay o = overlay(app, args.config);
  o.fill("--mesh", "meshes", args.meshes);
  o.fill("--rig", "rig", args.rig);
  o.fill("--out", "out_dir", args.out_dir);
  o.fill("--view", "views", args.azimuths);

  require_exists(args.rig, "rig");
  canonical::CanonicalRig rig = canonical::load_rig(args.rig);
  Scene scene = load_scene(args.meshes);
  if (args.azimuths.empty())
    args.azimuths.assign(std::begin(canonical::CanonicalRig::kAzimuths), std::end(canonical::CanonicalRig::kAzimuths));

  render::RasterizeOptions opts;
  opts.rgb = true;
  for (double az : args.azimuths) {
    const Camera& camera = rig.cameras[canonical::CanonicalRig::view_index(az)];
    render::RenderOutput out = render::rasterize(scene, camera, opts);
    fs::path dir = fs::path(args.out_dir) / view_dir_name(az);
    fs::create_directories(dir);
    atomic_png(dir / "rgb.png", *out.rgb);
    atomic_png(dir / "mask.png", out.foreground_mask());
    atomic_pfm(dir / "depth.pfm", out.depth);
    atomic_pfm(dir / "normal.pfm", out.normal);
    std::cout << "rendered " << dir.string() << "\n";
  }
}

// ---------------------------------------------------------------- pers2ortho

struct Pers2OrthoArgs {
  std::string rgb, depth, mask, normal, camera, rig;
  std::vector<std::string> meshes;
  std::string out_dir = "out";
  double tau = 0.02;
  bool refine = false;
  int refine_iters = 200;
  double refine_lr = 0.02;
  std::string config;
};

void run_pers2ortho(const CLI::App* app, const Pers2OrthoArgs& args_in) {
  Pers2OrthoArgs args = args_in;
  ConfigOverlay o = overlay(app, args.config);
  o.fill("--rgb", "rgb", args.rgb);
  o.fill("--depth", "depth", args.depth);
  o.fill("--mask", "mask", args.mask);
  o.fill("--normal", "normal", args.normal);
  o.fill("--camera", "camera", args.camera);
  o.fill("--rig", "rig", args.rig);
  o.fill("--mesh", "meshes", args.meshes);
  o.fill("--out", "out_dir", args.out_dir);
  o.fill("--tau", "tau", args.tau);
  o.fill("--refine", "refine", args.refine);
  o.fill("--refine-iters", "refine_iters", args.refine_iters);
  o.fill("--refine-lr", "refine_lr", args.refine_lr);

  // load every input before writing anything, so a bad file exits cleanly
  require_exists(args.rgb, "rgb");
  require_exists(args.depth, "depth");
  require_exists(args.mask, "mask");
  require_exists(args.camera, "camera");
  require_exists(args.rig, "rig");
  ImageBuffer rgb = io::read_png(args.rgb, Semantic::Rgb);
  ImageBuffer depth = io::read_pfm(args.depth, Semantic::Depth);
  ImageBuffer mask = io::read_png(args.mask, Semantic::Mask);
  Camera camera = canonical::load_camera(args.camera);
  canonical::CanonicalRig rig = canonical::load_rig(args.rig);
  Scene scene = load_scene(args.meshes);
  ImageBuffer persp_normal;
  if (args.refine) {
    if (args.normal.empty()) throw InputError("--refine needs --normal (target normal map)");
    require_exists(args.normal, "normal");
    persp_normal = io::read_pfm(args.normal, Semantic::Normal);
  }

  ImageBuffer validity = p2o::depth_edge_filter(depth, mask);
  ColoredPointCloud pcd = p2o::depth_to_pointcloud(depth, rgb, camera, validity);
  std::cout << "lifted " << pcd.points.size() << " points\n";

  if (args.refine) {
    for (auto& mesh : scene.instances) {
      mesh = p2o::refine_partial_geometry(mesh, depth, persp_normal, camera, args.refine_iters, args.refine_lr);
      atomic_ply(fs::path(args.out_dir) / "mesh" / ("instance_" + std::to_string(mesh.instance_id) + ".ply"), mesh);
    }
    std::cout << "refined " << scene.instances.size() << " meshes\n";
  }

  p2o::PartialViewSet views;
  std::map<int, ImageBuffer> mesh_depth;
  for (int i = 0; i < canonical::CanonicalRig::kViews; ++i) {
    render::RenderOutput out = render::rasterize(scene, rig.cameras[i]);
    views.smplx_normals[i] = out.normal;
    mesh_depth[i] = out.depth;
  }
  for (int idx : p2o::kPartialViews) {
    const Camera& target = rig.cameras[idx];
    ColoredPointCloud visible = p2o::visible_point_select(pcd, mesh_depth[idx], target, args.tau);
    p2o::Reprojection repro = p2o::reproject_pcd(visible, target);
    views.partial_rgb[idx] = repro.rgb;
    views.visibility[idx] = repro.visibility;
    std::cout << "view " << canonical::CanonicalRig::kAzimuths[idx] << ": kept " << visible.points.size()
              << " points, coverage " << mask_coverage(repro.visibility) << "\n";
  }
  views.validate();
  p2o::save_partial_views(views, args.out_dir);
  std::cout << "wrote partial views under " << args.out_dir << "\n";
}

// ---------------------------------------------------------------- refine

struct RefineArgs {
  std::vector<std::string> init;
  std::string targets_dir;
  std::string rig;
  std::string joints;
  std::string out_dir = "out";
  double contact_radius = 0.02;
  refine::OptimizationConfig opt;
  std::string config;
};

void run_refine(const CLI::App* app, const RefineArgs& args_in) {
  RefineArgs args = args_in;
  ConfigOverlay o = overlay(app, args.config);
  o.fill("--init", "init", args.init);
  o.fill("--targets", "targets_dir", args.targets_dir);
  o.fill("--rig", "rig", args.rig);
  o.fill("--joints", "joints", args.joints);
  o.fill("--out", "out_dir", args.out_dir);
  o.fill("--contact-radius", "contact_radius", args.contact_radius);
  if (o.cfg.contains("optimization")) {
    refine::OptimizationConfig from_cfg = refine::config_from_json(o.cfg.at("optimization").dump());
    if (app->count("--lambda-group") == 0) args.opt.lambda_group = from_cfg.lambda_group;
    if (app->count("--lambda-inst") == 0) args.opt.lambda_inst = from_cfg.lambda_inst;
    if (app->count("--lambda-pen") == 0) args.opt.lambda_pen = from_cfg.lambda_pen;
    if (app->count("--lambda-vis") == 0) args.opt.lambda_vis = from_cfg.lambda_vis;
    if (app->count("--tol") == 0) args.opt.tol = from_cfg.tol;
    if (app->count("--iters") == 0) args.opt.iters = from_cfg.iters;
    if (app->count("--base-lr") == 0) args.opt.base_lr = from_cfg.base_lr;
  }
  args.opt.validate();

  require_exists(args.rig, "rig");
  require_exists(args.targets_dir, "targets directory");
  canonical::CanonicalRig rig = canonical::load_rig(args.rig);
  Scene scene = load_scene(args.init);

  refine::NormalTargets targets;
  refine::GtVisibilitySet gt_visibility;
  for (int i = 0; i < canonical::CanonicalRig::kViews; ++i) {
    fs::path vdir = fs::path(args.targets_dir) / view_dir_name(canonical::CanonicalRig::kAzimuths[i]);
    require_exists(vdir / "normal.pfm", "group normal target");
    targets.group[i] = io::read_pfm(vdir / "normal.pfm", Semantic::Normal);
    for (const auto& mesh : scene.instances) {
      fs::path solo = vdir / ("instance_" + std::to_string(mesh.instance_id) + ".pfm");
      if (fs::exists(solo)) targets.instance[{i, mesh.instance_id}] = io::read_pfm(solo, Semantic::Normal);
    }
    fs::path inst_map = vdir / "gt_instance.png", part_map = vdir / "gt_part.png";
    if (fs::exists(inst_map) && fs::exists(part_map)) {
      refine::GtPartVisibility vis;
      vis.instance = io::read_png16(inst_map, vis.width, vis.height);
      int pw = 0, ph = 0;
      vis.part = io::read_png16(part_map, pw, ph);
      if (pw != vis.width || ph != vis.height) throw InputError("gt winner maps disagree on size: " + vdir.string());
      gt_visibility[i] = std::move(vis);
    }
  }

  std::vector<Eigen::Vector3d> joints;
  if (!args.joints.empty()) {
    require_exists(args.joints, "joints");
    joints = load_joints(args.joints);
  }

  refine::PartPairSet pairs = refine::contact_pairs_from_meshes(scene, args.contact_radius);
  std::cout << "optimizing " << scene.total_vertices() << " vertices, " << pairs.pairs.size()
            << " contact pairs, " << args.opt.iters << " iterations\n";

  refine::OptimizeResult result = refine::optimize(scene, targets, gt_visibility, pairs, args.opt, rig, joints);

  fs::create_directories(fs::path(args.out_dir) / "mesh");
  for (const auto& mesh : result.scene.instances)
    atomic_ply(fs::path(args.out_dir) / "mesh" / ("instance_" + std::to_string(mesh.instance_id) + ".ply"), mesh);
  io::atomic_write_text((fs::path(args.out_dir) / "loss_trace.csv").string(), result.trace.to_csv());

  double initial = result.trace.rows.front().total;
  double final_total = result.trace.rows.back().total;
  std::cout << "L_total " << initial << " -> " << final_total << (final_total <= initial ? " (<= initial)" : "")
            << "\nwrote " << args.out_dir << "/mesh and loss_trace.csv\n";
}

// ---------------------------------------------------------------- fuse-texture

struct FuseArgs {
  std::vector<std::string> meshes;
  std::string views_dir;
  std::string out_dir = "out";
  int dilate = 21;
  bool debug = false;
  std::string config;
};

void run_fuse(const CLI::App* app, const FuseArgs& args_in) {
  FuseArgs args = args_in;
  ConfigOverlay o = overlay(app, args.config);
  o.fill("--mesh", "meshes", args.meshes);
  o.fill("--views", "views_dir", args.views_dir);
  o.fill("--out", "out_dir", args.out_dir);
  o.fill("--dilate", "dilate", args.dilate);
  o.fill("--debug", "debug", args.debug);

  require_exists(args.views_dir, "views directory");
  std::vector<texture::FusionView> views;
  std::vector<double> azimuths;
  for (double az : canonical::CanonicalRig::kAzimuths) {
    fs::path dir = fs::path(args.views_dir) / view_dir_name(az);
    if (!fs::exists(dir)) continue;
    require_exists(dir / "rgb.png", "view rgb");
    require_exists(dir / "depth.pfm", "view depth");
    require_exists(dir / "camera.json", "view camera");
    texture::FusionView view;
    view.camera = canonical::load_camera((dir / "camera.json").string());
    view.rgb = io::read_png(dir / "rgb.png", Semantic::Rgb);
    view.depth = io::read_pfm(dir / "depth.pfm", Semantic::Depth);
    views.push_back(std::move(view));
    azimuths.push_back(az);
  }
  if (views.empty()) throw InputError("no views found under " + args.views_dir);

  // occlusion-test tolerance: two pixel footprints of depth slack
  auto vis_eps = [](const texture::FusionView& view) {
    if (view.camera.mode == Camera::Mode::Orthographic) return 2.0 * view.camera.scale;
    double sum = 0.0;
    std::size_t n = 0;
    for (float d : view.depth.data)
      if (d > 0.0f) {
        sum += d;
        ++n;
      }
    double mean_depth = n > 0 ? sum / static_cast<double>(n) : 1.0;
    return 2.0 * mean_depth / std::min(view.camera.fx, view.camera.fy);
  };

  Scene scene = load_scene(args.meshes);
  fs::create_directories(fs::path(args.out_dir) / "mesh");
  for (const auto& mesh : scene.instances) {
    std::vector<std::vector<std::uint8_t>> visibility;
    for (const auto& view : views)
      visibility.push_back(render::vertex_visibility(mesh, view.camera, view.depth, vis_eps(view)));
    bool unseen = false;
    std::vector<texture::ViewContribution> contributions;
    Mesh fused = texture::fuse_texture(mesh, views, visibility, args.dilate, &unseen,
                                       args.debug ? &contributions : nullptr);
    if (unseen) std::cerr << "warning: instance " << mesh.instance_id << " unseen in every view, gray fallback\n";
    atomic_ply(fs::path(args.out_dir) / "mesh" / ("instance_" + std::to_string(mesh.instance_id) + ".ply"), fused);
    if (args.debug) {
      fs::path ddir = fs::path(args.out_dir) / "debug";
      fs::create_directories(ddir);
      for (std::size_t i = 0; i < contributions.size(); ++i)
        atomic_png(ddir / (view_dir_name(azimuths[i]) + "_instance_" + std::to_string(mesh.instance_id) +
                           "_confidence.png"),
                   contributions[i].confidence_mask);
    }
  }
  std::cout << "fused " << scene.instances.size() << " meshes from " << views.size() << " views into "
            << args.out_dir << "/mesh\n";
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::vector<std::string> pred, gt;
  std::string out = "metrics.json";
  std::string csv;
  metrics::EvaluateOptions opts;
  std::string config;
};

void run_evaluate(const CLI::App* app, const EvaluateArgs& args_in) {
  EvaluateArgs args = args_in;
  ConfigOverlay o = overlay(app, args.config);
  o.fill("--pred", "pred", args.pred);
  o.fill("--gt", "gt", args.gt);
  o.fill("--out", "out", args.out);
  o.fill("--csv", "csv", args.csv);
  long long samples = static_cast<long long>(args.opts.samples);
  o.fill("--samples", "samples", samples);
  args.opts.samples = static_cast<std::size_t>(samples);
  long long seed = static_cast<long long>(args.opts.seed);
  o.fill("--seed", "seed", seed);
  args.opts.seed = static_cast<std::uint64_t>(seed);
  o.fill("--resolution", "resolution", args.opts.resolution);
  o.fill("--tau", "tau_cm", args.opts.tau_cm);
  o.fill("--delta", "contact_delta", args.opts.contact_delta);

  Scene pred = load_scene(args.pred);
  Scene gt = load_scene(args.gt);
  metrics::MetricReport report = metrics::evaluate(pred, gt, args.opts);

  io::atomic_write_text(args.out, report.to_json());
  if (!args.csv.empty()) io::atomic_write_text(args.csv, report.to_csv());

  auto print_row = [](const char* name, double v) {
    if (std::isinf(v)) std::printf("  %-12s %12s\n", name, "inf");
    else std::printf("  %-12s %12.6f\n", name, v);
  };
  std::printf("scene metrics\n");
  print_row("cd_cm", report.cd_cm);
  print_row("p2s_cm", report.p2s_cm);
  print_row("nc", report.nc);
  print_row("fscore", report.fscore);
  print_row("bbox_iou", report.bbox_iou);
  print_row("norm_l2", report.norm_l2);
  if (report.cp_defined) print_row("cp", report.cp);
  print_row("psnr", report.psnr);
  print_row("ssim", report.ssim);
  print_row("occ_norm_l2", report.occ_norm_l2);
  print_row("occ_psnr", report.occ_psnr);
  print_row("occ_ssim", report.occ_ssim);
  for (const auto& [id, m] : report.per_instance) {
    std::printf("instance %d\n", id);
    print_row("cd_cm", m.cd_cm);
    print_row("p2s_cm", m.p2s_cm);
    print_row("nc", m.nc);
    print_row("fscore", m.fscore);
    print_row("bbox_iou", m.bbox_iou);
  }
  std::cout << "wrote " << args.out << "\n";
}

// ---------------------------------------------------------------- compose

struct ComposeArgs {
  std::string group;
  std::vector<std::string> instances;
  std::vector<std::string> masks;
  double alpha = latent::kDefaultAlpha;
  bool literal_sum = false;
  std::string out = "composed.lat";
  std::string config;
};

void run_compose(const CLI::App* app, const ComposeArgs& args_in) {
  ComposeArgs args = args_in;
  ConfigOverlay o = overlay(app, args.config);
  o.fill("--group", "group", args.group);
  o.fill("--instance", "instances", args.instances);
  o.fill("--mask", "masks", args.masks);
  o.fill("--alpha", "alpha", args.alpha);
  o.fill("--literal-sum", "literal_sum", args.literal_sum);
  o.fill("--out", "out", args.out);

  require_exists(args.group, "group latent");
  if (args.instances.size() != args.masks.size())
    throw InputError("need one --mask per --instance");
  latent::LatentGrid group = latent::load_latent(args.group);

  std::vector<std::pair<latent::LatentGrid, latent::RegionMask>> instances;
  for (std::size_t i = 0; i < args.instances.size(); ++i) {
    require_exists(args.instances[i], "instance latent");
    require_exists(args.masks[i], "mask");
    latent::LatentGrid grid = latent::load_latent(args.instances[i]);
    ImageBuffer png = io::read_png(args.masks[i], Semantic::Mask);
    latent::RegionMask mask;
    if (png.width == grid.width && png.height == grid.height) {
      mask = latent::RegionMask(grid.height, grid.width);
      for (int y = 0; y < png.height; ++y)
        for (int x = 0; x < png.width; ++x) mask.at(x, y) = png.at(x, y) > 0.5f ? 1 : 0;
    } else {
      mask = latent::downsample_mask_to_latent(png, grid.height, grid.width);
    }
    instances.emplace_back(std::move(grid), std::move(mask));
  }

  latent::LatentGrid composed = latent::compose_instance_to_group(group, instances, args.alpha, args.literal_sum);
  latent::save_latent(composed, args.out);
  std::cout << "wrote " << args.out << " (" << composed.height << "x" << composed.width << "x" << composed.channels
            << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geometry-processing pipeline for multi-human reconstruction"};
  app.require_subcommand(1);

  RigArgs rig_args;
  CLI::App* rig = app.add_subcommand("rig", "emit the six-camera orthographic rig as JSON");
  rig->add_option("--out", rig_args.out, "output path");
  rig->add_option("--resolution", rig_args.resolution, "view resolution in pixels");
  rig->add_option("--distance", rig_args.distance, "camera distance from the origin");
  rig->add_option("--config", rig_args.config, "JSON config file");

  RenderArgs render_args;
  CLI::App* rnd = app.add_subcommand("render", "rasterize meshes from rig viewpoints");
  rnd->add_option("--mesh", render_args.meshes, "mesh files (instances in order)");
  rnd->add_option("--rig", render_args.rig, "rig JSON");
  rnd->add_option("--out", render_args.out_dir, "output directory");
  rnd->add_option("--view", render_args.azimuths, "azimuths to render (default: all six)");
  rnd->add_option("--config", render_args.config, "JSON config file");

  Pers2OrthoArgs p2o_args;
  CLI::App* p2o_cmd = app.add_subcommand("pers2ortho", "lift a perspective observation to partial canonical views");
  p2o_cmd->add_option("--rgb", p2o_args.rgb, "perspective rgb PNG");
  p2o_cmd->add_option("--depth", p2o_args.depth, "perspective depth PFM");
  p2o_cmd->add_option("--mask", p2o_args.mask, "foreground mask PNG");
  p2o_cmd->add_option("--normal", p2o_args.normal, "perspective normal PFM (for --refine)");
  p2o_cmd->add_option("--camera", p2o_args.camera, "perspective camera JSON");
  p2o_cmd->add_option("--rig", p2o_args.rig, "rig JSON");
  p2o_cmd->add_option("--mesh", p2o_args.meshes, "body model meshes");
  p2o_cmd->add_option("--out", p2o_args.out_dir, "output directory");
  p2o_cmd->add_option("--tau", p2o_args.tau, "visibility depth tolerance");
  p2o_cmd->add_flag("--refine", p2o_args.refine, "refine meshes against the observation first");
  p2o_cmd->add_option("--refine-iters", p2o_args.refine_iters, "refinement iterations");
  p2o_cmd->add_option("--refine-lr", p2o_args.refine_lr, "refinement learning rate");
  p2o_cmd->add_option("--config", p2o_args.config, "JSON config file");

  RefineArgs refine_args;
  CLI::App* ref = app.add_subcommand("refine", "multi-view mesh optimization");
  ref->add_option("--init", refine_args.init, "initial meshes (instances in order)");
  ref->add_option("--targets", refine_args.targets_dir, "target directory (view_{azimuth}/normal.pfm ...)");
  ref->add_option("--rig", refine_args.rig, "rig JSON");
  ref->add_option("--joints", refine_args.joints, "joints JSON for adaptive learning rates");
  ref->add_option("--out", refine_args.out_dir, "output directory");
  ref->add_option("--contact-radius", refine_args.contact_radius, "contact pair discovery radius");
  ref->add_option("--lambda-group", refine_args.opt.lambda_group, "group normal weight");
  ref->add_option("--lambda-inst", refine_args.opt.lambda_inst, "instance normal weight");
  ref->add_option("--lambda-pen", refine_args.opt.lambda_pen, "penetration weight");
  ref->add_option("--lambda-vis", refine_args.opt.lambda_vis, "visibility weight");
  ref->add_option("--tol", refine_args.opt.tol, "penetration tolerance");
  ref->add_option("--iters", refine_args.opt.iters, "iterations");
  ref->add_option("--base-lr", refine_args.opt.base_lr, "base learning rate");
  ref->add_option("--config", refine_args.config, "JSON config file");

  FuseArgs fuse_args;
  CLI::App* fuse = app.add_subcommand("fuse-texture", "blend view images into vertex colors");
  fuse->add_option("--mesh", fuse_args.meshes, "meshes to texture (instances in order)");
  fuse->add_option("--views", fuse_args.views_dir, "views directory (view_{azimuth}/rgb.png ...)");
  fuse->add_option("--out", fuse_args.out_dir, "output directory");
  fuse->add_option("--dilate", fuse_args.dilate, "edge-confidence dilation kernel");
  fuse->add_flag("--debug", fuse_args.debug, "emit per-view confidence PNGs");
  fuse->add_option("--config", fuse_args.config, "JSON config file");

  EvaluateArgs eval_args;
  CLI::App* eval = app.add_subcommand("evaluate", "score a predicted scene against ground truth");
  eval->add_option("--pred", eval_args.pred, "predicted meshes (instances in order)");
  eval->add_option("--gt", eval_args.gt, "ground-truth meshes (instances in order)");
  eval->add_option("--out", eval_args.out, "metrics JSON path");
  eval->add_option("--csv", eval_args.csv, "optional metrics CSV path");
  eval->add_option("--samples", eval_args.opts.samples, "surface samples per mesh");
  eval->add_option("--seed", eval_args.opts.seed, "sampling seed");
  eval->add_option("--resolution", eval_args.opts.resolution, "render resolution for image metrics");
  eval->add_option("--tau", eval_args.opts.tau_cm, "F-score threshold (cm)");
  eval->add_option("--delta", eval_args.opts.contact_delta, "contact threshold (m)");
  eval->add_option("--config", eval_args.config, "JSON config file");

  ComposeArgs compose_args;
  CLI::App* comp = app.add_subcommand("compose", "latent instance-to-group composition");
  comp->add_option("--group", compose_args.group, "group latent file");
  comp->add_option("--instance", compose_args.instances, "instance latent files");
  comp->add_option("--mask", compose_args.masks, "region mask PNGs (one per instance)");
  comp->add_option("--alpha", compose_args.alpha, "blend strength");
  comp->add_flag("--literal-sum", compose_args.literal_sum, "use the literal summed form");
  comp->add_option("--out", compose_args.out, "output latent file");
  comp->add_option("--config", compose_args.config, "JSON config file");

  try {
    app.parse(argc, argv);
    if (rig->parsed()) run_rig(rig, rig_args);
    if (rnd->parsed()) run_render(rnd, render_args);
    if (p2o_cmd->parsed()) run_pers2ortho(p2o_cmd, p2o_args);
    if (ref->parsed()) run_refine(ref, refine_args);
    if (fuse->parsed()) run_fuse(fuse, fuse_args);
    if (eval->parsed()) run_evaluate(eval, eval_args);
    if (comp->parsed()) run_compose(comp, compose_args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
