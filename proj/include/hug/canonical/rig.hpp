#pragma once

#include <Eigen/Core>
#include <array>
#include <string>

#include "hug/core/camera.hpp"
#include "hug/core/mesh.hpp"

namespace hug::canonical {

/// Six-view orthographic rig plus the normalization that placed the scene in
/// its unit cube. Azimuth 0 is the +Z front view; azimuths rotate the eye
/// about +Y.
struct CanonicalRig {
  static constexpr int kViews = 6;
  static constexpr double kAzimuths[kViews] = {0.0, 45.0, 90.0, 180.0, 270.0, 315.0};

  std::array<Camera, kViews> cameras;
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double scale = 2.0;  // identity normalization: v_norm = (v - c)/(s/2)

  /// Index of the view with the given azimuth; throws for azimuths not in
  /// the rig.
  static int view_index(double azimuth_deg);
};

struct NormalizedScene {
  Scene scene;
  Eigen::Vector3d center;
  double scale;
};

/// Rescales every instance into [-1,1]^3 via v = (v - c)/(s/2) with c the
/// scene bounding-box center and s the largest axis extent grown by
/// `padding`. Zero-extent scenes are rejected.
NormalizedScene normalize_scene(const Scene& scene, double padding = 0.05);

Eigen::Vector3d normalize_point(const Eigen::Vector3d& p, const Eigen::Vector3d& center, double scale);
Eigen::Vector3d denormalize_point(const Eigen::Vector3d& p, const Eigen::Vector3d& center, double scale);
Scene denormalize_scene(const Scene& scene, const Eigen::Vector3d& center, double scale);

/// Orthographic cameras at the six canonical azimuths, eye distance
/// `distance` from the origin, +Y up, frame spanning 3 world units across
/// `resolution` pixels so anything in [-sqrt(2), sqrt(2)] x [-1, 1] fits.
CanonicalRig build_rig(double distance = 3.0, int resolution = 768);

/// JSON camera-file round trip: an array of six objects
/// {mode, azimuth_deg, rotation, translation, scale, width, height}.
std::string rig_to_json(const CanonicalRig& rig);
CanonicalRig rig_from_json(const std::string& text);
void save_rig(const CanonicalRig& rig, const std::string& path);
CanonicalRig load_rig(const std::string& path);

/// Single-camera JSON (same field names; perspective cameras carry
/// fx/fy/cx/cy instead of scale).
std::string camera_to_json(const Camera& camera);
Camera camera_from_json(const std::string& text);
Camera load_camera(const std::string& path);

}  // namespace hug::canonical
