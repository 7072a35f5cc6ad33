#include "hug/canonical/rig.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "hug/core/errors.hpp"
#include "hug/io/atomic_file.hpp"

namespace hug::canonical {

using nlohmann::json;

constexpr double CanonicalRig::kAzimuths[CanonicalRig::kViews];

int CanonicalRig::view_index(double azimuth_deg) {
  for (int i = 0; i < kViews; ++i)
    if (std::abs(kAzimuths[i] - azimuth_deg) < 1e-9) return i;
  throw InputError("CanonicalRig: azimuth " + std::to_string(azimuth_deg) + " is not a rig view");
}

NormalizedScene normalize_scene(const Scene& scene, double padding) {
  scene.validate();
  if (scene.instances.empty()) throw InputError("normalize_scene: empty scene");
  Aabb box = bounding_box(scene);
  if (box.empty) throw InputError("normalize_scene: scene has no vertices");
  Eigen::Vector3d extent = box.extent();
  double max_extent = extent.maxCoeff();
  if (max_extent <= 0.0) throw InputError("normalize_scene: zero-extent scene");

  NormalizedScene out;
  out.center = box.center();
  out.scale = max_extent * (1.0 + padding);
  out.scene = scene;
  double half = out.scale / 2.0;
  for (Mesh& mesh : out.scene.instances)
    for (auto& v : mesh.vertices) v = (v - out.center) / half;
  return out;
}

Eigen::Vector3d normalize_point(const Eigen::Vector3d& p, const Eigen::Vector3d& center, double scale) {
  return (p - center) / (scale / 2.0);
}

Eigen::Vector3d denormalize_point(const Eigen::Vector3d& p, const Eigen::Vector3d& center, double scale) {
  return p * (scale / 2.0) + center;
}

Scene denormalize_scene(const Scene& scene, const Eigen::Vector3d& center, double scale) {
  Scene out = scene;
  for (Mesh& mesh : out.instances)
    for (auto& v : mesh.vertices) v = denormalize_point(v, center, scale);
  return out;
}

CanonicalRig build_rig(double distance, int resolution) {
  if (distance <= 0.0) throw InputError("build_rig: distance must be positive");
  if (resolution < 1) throw InputError("build_rig: resolution must be positive");
  CanonicalRig rig;
  for (int i = 0; i < CanonicalRig::kViews; ++i) {
    double az = CanonicalRig::kAzimuths[i] * M_PI / 180.0;
    Eigen::Vector3d eye(distance * std::sin(az), 0.0, distance * std::cos(az));
    Camera cam;
    look_at(eye, Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitY(), cam.rotation, cam.translation);
    cam.mode = Camera::Mode::Orthographic;
    cam.width = resolution;
    cam.height = resolution;
    cam.scale = 3.0 / resolution;  // 3 world units across the frame
    cam.cx = resolution / 2.0;
    cam.cy = resolution / 2.0;
    rig.cameras[i] = cam;
  }
  return rig;
}

namespace {

json camera_json(const Camera& cam, double azimuth_deg, bool with_azimuth) {
  json j;
  j["mode"] = cam.mode == Camera::Mode::Orthographic ? "orthographic" : "perspective";
  if (with_azimuth) j["azimuth_deg"] = azimuth_deg;
  json rot = json::array();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) rot.push_back(cam.rotation(r, c));
  j["rotation"] = rot;
  j["translation"] = {cam.translation.x(), cam.translation.y(), cam.translation.z()};
  if (cam.mode == Camera::Mode::Orthographic) {
    j["scale"] = cam.scale;
  } else {
    j["fx"] = cam.fx;
    j["fy"] = cam.fy;
  }
  j["cx"] = cam.cx;
  j["cy"] = cam.cy;
  j["width"] = cam.width;
  j["height"] = cam.height;
  return j;
}

Camera camera_from(const json& j) {
  Camera cam;
  std::string mode = j.at("mode").get<std::string>();
  if (mode == "orthographic") {
    cam.mode = Camera::Mode::Orthographic;
  } else if (mode == "perspective") {
    cam.mode = Camera::Mode::Perspective;
  } else {
    throw InputError("camera JSON: unknown mode '" + mode + "'");
  }
  const auto& rot = j.at("rotation");
  if (rot.size() != 9) throw InputError("camera JSON: rotation must hold 9 values");
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) cam.rotation(r, c) = rot[r * 3 + c].get<double>();
  const auto& tr = j.at("translation");
  if (tr.size() != 3) throw InputError("camera JSON: translation must hold 3 values");
  for (int c = 0; c < 3; ++c) cam.translation[c] = tr[c].get<double>();
  cam.width = j.at("width").get<int>();
  cam.height = j.at("height").get<int>();
  if (cam.mode == Camera::Mode::Orthographic) {
    cam.scale = j.at("scale").get<double>();
  } else {
    cam.fx = j.at("fx").get<double>();
    cam.fy = j.at("fy").get<double>();
  }
  cam.cx = j.value("cx", cam.width / 2.0);
  cam.cy = j.value("cy", cam.height / 2.0);
  cam.validate();
  return cam;
}

}  // namespace

std::string rig_to_json(const CanonicalRig& rig) {
  json arr = json::array();
  for (int i = 0; i < CanonicalRig::kViews; ++i)
    arr.push_back(camera_json(rig.cameras[i], CanonicalRig::kAzimuths[i], true));
  return arr.dump(2) + "\n";
}

CanonicalRig rig_from_json(const std::string& text) {
  json arr = json::parse(text);
  if (!arr.is_array() || arr.size() != CanonicalRig::kViews)
    throw InputError("rig JSON: expected an array of 6 cameras");
  CanonicalRig rig;
  std::array<bool, CanonicalRig::kViews> seen{};
  for (const auto& j : arr) {
    int idx = CanonicalRig::view_index(j.at("azimuth_deg").get<double>());
    if (seen[idx]) throw InputError("rig JSON: duplicate azimuth");
    seen[idx] = true;
    rig.cameras[idx] = camera_from(j);
    if (rig.cameras[idx].mode != Camera::Mode::Orthographic)
      throw InputError("rig JSON: rig cameras must be orthographic");
  }
  return rig;
}

void save_rig(const CanonicalRig& rig, const std::string& path) { io::atomic_write_text(path, rig_to_json(rig)); }

CanonicalRig load_rig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("load_rig: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return rig_from_json(ss.str());
}

std::string camera_to_json(const Camera& camera) { return camera_json(camera, 0.0, false).dump(2) + "\n"; }

Camera camera_from_json(const std::string& text) { return camera_from(json::parse(text)); }

Camera load_camera(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("load_camera: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return camera_from_json(ss.str());
}

}  // namespace hug::canonical
