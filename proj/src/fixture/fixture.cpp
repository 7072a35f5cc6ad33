#include "hug/fixture/fixture.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <random>

#include "hug/canonical/rig.hpp"
#include "hug/core/errors.hpp"
#include "hug/io/atomic_file.hpp"
#include "hug/io/image_io.hpp"
#include "hug/io/mesh_io.hpp"
#include "hug/render/rasterizer.hpp"

namespace hug::fixture {

namespace {

/// Orthonormal frame with w as its third axis.
void frame_from_axis(const Eigen::Vector3d& w, Eigen::Vector3d& u, Eigen::Vector3d& v) {
  Eigen::Vector3d pick = std::abs(w.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  u = pick.cross(w).normalized();
  v = w.cross(u);
}

double mesh_volume(const Mesh& mesh) {
  double six_v = 0.0;
  for (const auto& f : mesh.faces)
    six_v += mesh.vertices[f[0]].dot(mesh.vertices[f[1]].cross(mesh.vertices[f[2]]));
  return six_v / 6.0;
}

void flip_if_inverted(Mesh& mesh) {
  if (mesh_volume(mesh) >= 0.0) return;
  for (auto& f : mesh.faces) std::swap(f[1], f[2]);
}

void append(Mesh& dst, const Mesh& src) {
  int base = static_cast<int>(dst.vertices.size());
  dst.vertices.insert(dst.vertices.end(), src.vertices.begin(), src.vertices.end());
  dst.part_labels.insert(dst.part_labels.end(), src.part_labels.begin(), src.part_labels.end());
  for (const auto& f : src.faces) dst.faces.emplace_back(f[0] + base, f[1] + base, f[2] + base);
}

}  // namespace

Mesh make_capsule(const Eigen::Vector3d& p0, const Eigen::Vector3d& p1, double radius, int segments, int rings,
                  std::int32_t part) {
  if (segments < 3 || rings < 1 || radius <= 0.0) throw InputError("make_capsule: bad parameters");
  Eigen::Vector3d axis = p1 - p0;
  double length = axis.norm();
  if (length <= 0.0) throw InputError("make_capsule: zero-length axis");
  Eigen::Vector3d w = axis / length, u, v;
  frame_from_axis(w, u, v);

  Mesh mesh;
  auto push = [&](const Eigen::Vector3d& p) {
    mesh.vertices.push_back(p);
    mesh.part_labels.push_back(part);
    return static_cast<int>(mesh.vertices.size()) - 1;
  };

  // ring ladder: bottom pole, `rings` bands up to the p0 equator, the p1
  // equator and its bands, top pole
  int bottom_pole = push(p0 - radius * w);
  std::vector<std::vector<int>> ladder;
  auto push_ring = [&](const Eigen::Vector3d& center, double r) {
    std::vector<int> ring(segments);
    for (int j = 0; j < segments; ++j) {
      double a = 2.0 * M_PI * j / segments;
      ring[j] = push(center + r * (std::cos(a) * u + std::sin(a) * v));
    }
    ladder.push_back(ring);
  };
  for (int i = 1; i <= rings; ++i) {
    double theta = 0.5 * M_PI * i / rings;  // pole -> equator
    push_ring(p0 - radius * std::cos(theta) * w, radius * std::sin(theta));
  }
  for (int i = rings; i >= 1; --i) {
    double theta = 0.5 * M_PI * i / rings;
    push_ring(p1 + radius * std::cos(theta) * w, radius * std::sin(theta));
  }
  int top_pole = push(p1 + radius * w);

  for (int j = 0; j < segments; ++j) {
    int jn = (j + 1) % segments;
    mesh.faces.emplace_back(bottom_pole, ladder.front()[jn], ladder.front()[j]);
    mesh.faces.emplace_back(top_pole, ladder.back()[j], ladder.back()[jn]);
  }
  for (std::size_t i = 0; i + 1 < ladder.size(); ++i)
    for (int j = 0; j < segments; ++j) {
      int jn = (j + 1) % segments;
      mesh.faces.emplace_back(ladder[i][j], ladder[i][jn], ladder[i + 1][j]);
      mesh.faces.emplace_back(ladder[i][jn], ladder[i + 1][jn], ladder[i + 1][j]);
    }
  flip_if_inverted(mesh);
  return mesh;
}

Mesh make_uv_sphere(const Eigen::Vector3d& center, double radius, int stacks, int slices, int instance_id,
                    std::int32_t part) {
  if (stacks < 2 || slices < 3 || radius <= 0.0) throw InputError("make_uv_sphere: bad parameters");
  Mesh mesh;
  mesh.instance_id = instance_id;
  auto push = [&](const Eigen::Vector3d& p) {
    mesh.vertices.push_back(p);
    mesh.part_labels.push_back(part);
    return static_cast<int>(mesh.vertices.size()) - 1;
  };
  int south = push(center - radius * Eigen::Vector3d::UnitY());
  std::vector<std::vector<int>> rows;
  for (int i = 1; i < stacks; ++i) {
    double theta = M_PI * i / stacks;  // from the south pole
    std::vector<int> row(slices);
    for (int j = 0; j < slices; ++j) {
      double a = 2.0 * M_PI * j / slices;
      row[j] = push(center + radius * Eigen::Vector3d(std::sin(theta) * std::cos(a), -std::cos(theta),
                                                      std::sin(theta) * std::sin(a)));
    }
    rows.push_back(row);
  }
  int north = push(center + radius * Eigen::Vector3d::UnitY());
  for (int j = 0; j < slices; ++j) {
    int jn = (j + 1) % slices;
    mesh.faces.emplace_back(south, rows.front()[jn], rows.front()[j]);
    mesh.faces.emplace_back(north, rows.back()[j], rows.back()[jn]);
  }
  for (std::size_t i = 0; i + 1 < rows.size(); ++i)
    for (int j = 0; j < slices; ++j) {
      int jn = (j + 1) % slices;
      mesh.faces.emplace_back(rows[i][j], rows[i][jn], rows[i + 1][j]);
      mesh.faces.emplace_back(rows[i][jn], rows[i + 1][jn], rows[i + 1][j]);
    }
  flip_if_inverted(mesh);
  return mesh;
}

Figure make_figure(const Eigen::Vector3d& pelvis, int reach, int instance_id, int segments, int rings) {
  Eigen::Vector3d neck = pelvis + Eigen::Vector3d(0, 0.48, 0);
  Eigen::Vector3d head0 = neck + Eigen::Vector3d(0, 0.06, 0);
  Eigen::Vector3d head1 = neck + Eigen::Vector3d(0, 0.24, 0);
  Eigen::Vector3d shoulder_l = neck + Eigen::Vector3d(-0.17, -0.04, 0);
  Eigen::Vector3d shoulder_r = neck + Eigen::Vector3d(0.17, -0.04, 0);
  Eigen::Vector3d hand_l = reach < 0 ? shoulder_l + Eigen::Vector3d(-0.52, -0.03, 0)
                                     : shoulder_l + Eigen::Vector3d(-0.05, -0.52, 0.02);
  Eigen::Vector3d hand_r = reach > 0 ? shoulder_r + Eigen::Vector3d(0.52, -0.03, 0)
                                     : shoulder_r + Eigen::Vector3d(0.05, -0.52, 0.02);
  Eigen::Vector3d hip_l = pelvis + Eigen::Vector3d(-0.09, -0.02, 0);
  Eigen::Vector3d hip_r = pelvis + Eigen::Vector3d(0.09, -0.02, 0);
  Eigen::Vector3d foot_l = hip_l + Eigen::Vector3d(-0.015, -0.88, 0.01);
  Eigen::Vector3d foot_r = hip_r + Eigen::Vector3d(0.015, -0.88, 0.01);

  Figure fig;
  fig.mesh.instance_id = instance_id;
  append(fig.mesh, make_capsule(head0, head1, 0.09, segments, rings, kPartHead));
  append(fig.mesh, make_capsule(pelvis, neck, 0.13, segments, rings, kPartTorso));
  append(fig.mesh, make_capsule(shoulder_l, hand_l, 0.045, segments, rings, kPartLeftArm));
  append(fig.mesh, make_capsule(shoulder_r, hand_r, 0.045, segments, rings, kPartRightArm));
  append(fig.mesh, make_capsule(hip_l, foot_l, 0.06, segments, rings, kPartLeftLeg));
  append(fig.mesh, make_capsule(hip_r, foot_r, 0.06, segments, rings, kPartRightLeg));
  fig.joints = {pelvis, neck,  head1, shoulder_l, hand_l, shoulder_r,
                hand_r, hip_l, foot_l, hip_r,      foot_r};
  return fig;
}

void paint_by_part(Mesh& mesh) {
  static const Eigen::Vector3d base[] = {
      {0.5, 0.5, 0.5},    // unlabelled
      {0.85, 0.65, 0.5},  // head
      {0.25, 0.4, 0.75},  // torso
      {0.75, 0.3, 0.3},   // left arm
      {0.85, 0.55, 0.2},  // right arm
      {0.3, 0.6, 0.3},    // left leg
      {0.45, 0.3, 0.6},   // right leg
  };
  mesh.vertex_colors.resize(mesh.vertices.size());
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    std::int32_t part = mesh.has_parts() ? mesh.part_labels[i] : 0;
    if (part < 0 || part > 6) part = 0;
    const Eigen::Vector3d& p = mesh.vertices[i];
    double mod = 0.8 + 0.2 * std::sin(3.0 * (p.x() + p.y() + p.z()));
    mesh.vertex_colors[i] = (mod * base[part]).cwiseMin(1.0).cwiseMax(0.0);
  }
}

TwoPersonFixture make_two_person(double hand_gap, double perturbation, std::uint64_t seed) {
  // reaching hand tips sit at +-(0.735 - d) from the middle
  double d = 0.5 * (1.47 + hand_gap);
  Figure a = make_figure(Eigen::Vector3d(-d, 0.95, 0), +1, 1);
  Figure b = make_figure(Eigen::Vector3d(d, 0.95, 0), -1, 2);
  paint_by_part(a.mesh);
  paint_by_part(b.mesh);

  Scene world;
  world.instances = {a.mesh, b.mesh};
  canonical::NormalizedScene normalized = canonical::normalize_scene(world);

  TwoPersonFixture fixture;
  fixture.gt = normalized.scene;
  fixture.center = normalized.center;
  fixture.scale = normalized.scale;
  for (const auto& fig : {a, b})
    for (const auto& j : fig.joints)
      fixture.joints.push_back(canonical::normalize_point(j, fixture.center, fixture.scale));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  fixture.init = fixture.gt;
  for (auto& mesh : fixture.init.instances) {
    double phase = 2.0 * M_PI * unit(rng);
    Eigen::Vector3d wave(1.0 + unit(rng), 1.0 + unit(rng), 1.0 + unit(rng));
    wave.normalize();
    VertexNormals normals = compute_vertex_normals(mesh);
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
      mesh.vertices[i] += perturbation * std::sin(9.0 * wave.dot(mesh.vertices[i]) + phase) * normals.normals[i];
  }
  return fixture;
}

Scene make_sphere_pair(double penetration, double radius, int stacks, int slices) {
  double offset = radius - 0.5 * penetration;
  Scene scene;
  scene.instances.push_back(make_uv_sphere(Eigen::Vector3d(-offset, 0, 0), radius, stacks, slices, 1));
  scene.instances.push_back(make_uv_sphere(Eigen::Vector3d(offset, 0, 0), radius, stacks, slices, 2));
  return scene;
}

namespace {

std::vector<std::int32_t> rounded_map(const ImageBuffer& buffer) {
  std::vector<std::int32_t> out(buffer.pixel_count());
  for (int y = 0; y < buffer.height; ++y)
    for (int x = 0; x < buffer.width; ++x)
      out[static_cast<std::size_t>(y) * buffer.width + x] = static_cast<std::int32_t>(std::lround(buffer.at(x, y)));
  return out;
}

}  // namespace

void write_fixture_tree(const std::filesystem::path& dir, const TwoPersonFixture& fixture, int resolution) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "gt");
  fs::create_directories(dir / "init");

  canonical::CanonicalRig rig = canonical::build_rig(3.0, resolution);
  canonical::save_rig(rig, (dir / "rig.json").string());

  for (const auto& mesh : fixture.gt.instances)
    io::write_ply(dir / "gt" / ("instance_" + std::to_string(mesh.instance_id) + ".ply"), mesh);
  for (const auto& mesh : fixture.init.instances)
    io::write_ply(dir / "init" / ("instance_" + std::to_string(mesh.instance_id) + ".ply"), mesh);

  {
    std::string joints = "{\n  \"joints\": [\n";
    for (std::size_t i = 0; i < fixture.joints.size(); ++i) {
      const auto& j = fixture.joints[i];
      joints += "    [" + std::to_string(j.x()) + ", " + std::to_string(j.y()) + ", " + std::to_string(j.z()) + "]";
      joints += i + 1 < fixture.joints.size() ? ",\n" : "\n";
    }
    joints += "  ]\n}\n";
    io::atomic_write_text((dir / "joints.json").string(), joints);
  }

  render::RasterizeOptions opts;
  opts.rgb = true;
  opts.parts = true;
  char name[32];
  for (int i = 0; i < canonical::CanonicalRig::kViews; ++i) {
    std::snprintf(name, sizeof name, "view_%03d", static_cast<int>(canonical::CanonicalRig::kAzimuths[i]));
    fs::path tdir = dir / "targets" / name;
    fs::path vdir = dir / "views" / name;
    fs::create_directories(tdir);
    fs::create_directories(vdir);

    const Camera& camera = rig.cameras[i];
    render::RenderOutput group = render::rasterize(fixture.gt, camera, opts);
    io::write_pfm(tdir / "normal.pfm", group.normal);
    io::write_png16(tdir / "gt_instance.png", rounded_map(group.instance_map), group.width, group.height);
    io::write_png16(tdir / "gt_part.png", group.part_label, group.width, group.height);
    for (const auto& mesh : fixture.gt.instances) {
      Scene solo;
      solo.instances.push_back(mesh);
      render::RenderOutput r = render::rasterize(solo, camera);
      io::write_pfm(tdir / ("instance_" + std::to_string(mesh.instance_id) + ".pfm"), r.normal);
    }

    io::write_png(vdir / "rgb.png", *group.rgb);
    io::write_pfm(vdir / "depth.pfm", group.depth);
    io::atomic_write_text((vdir / "camera.json").string(), canonical::camera_to_json(camera));
  }

  // one perspective observation of the normalized scene
  fs::create_directories(dir / "persp");
  Camera persp;
  persp.mode = Camera::Mode::Perspective;
  persp.width = persp.height = resolution;
  persp.fx = persp.fy = 1.2 * resolution;
  persp.cx = persp.cy = resolution / 2.0;
  look_at(Eigen::Vector3d(0, 0.15, 2.6), Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitY(), persp.rotation,
          persp.translation);
  render::RenderOutput view = render::rasterize(fixture.gt, persp, opts);
  io::write_png(dir / "persp" / "rgb.png", *view.rgb);
  io::write_pfm(dir / "persp" / "depth.pfm", view.depth);
  io::write_pfm(dir / "persp" / "normal.pfm", view.normal);
  io::write_png(dir / "persp" / "mask.png", view.foreground_mask());
  io::atomic_write_text((dir / "persp" / "camera.json").string(), canonical::camera_to_json(persp));
}

}  // namespace hug::fixture
