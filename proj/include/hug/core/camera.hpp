#pragma once

#include <Eigen/Core>

namespace hug {

/// Pinhole or orthographic camera. Extrinsics map world to camera:
/// p_cam = R p + T. The camera looks down its local -Z axis, +X right,
/// +Y up; depth is distance along the gaze, -z_cam, positive in front.
///
/// Continuous image coordinates (u,v) have (0,0) at the top-left image
/// corner; pixel (x,y) covers [x,x+1) x [y,y+1) and is sampled at its
/// centre (x+0.5, y+0.5).
///
/// Perspective: u = cx + fx * x_cam / depth, v = cy - fy * y_cam / depth.
/// Orthographic: u = cx + x_cam / scale, v = cy - y_cam / scale, where
/// scale is world units per pixel.
struct Camera {
  enum class Mode { Perspective, Orthographic };

  Mode mode = Mode::Perspective;
  double fx = 0, fy = 0, cx = 0, cy = 0;  // perspective intrinsics, pixels
  double scale = 0;                       // orthographic world-units-per-pixel
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  int width = 0;
  int height = 0;

  Eigen::Vector3d to_camera(const Eigen::Vector3d& p) const { return rotation * p + translation; }
  double depth_of(const Eigen::Vector3d& p) const { return -to_camera(p).z(); }

  /// Camera centre in world coordinates (-R^T T).
  Eigen::Vector3d eye() const { return -rotation.transpose() * translation; }
  /// Unit gaze direction in world coordinates (-R^T e_z).
  Eigen::Vector3d gaze() const { return -rotation.row(2).transpose(); }

  /// Frame normal buffers live in: rows right / up / gaze, i.e. world normals
  /// map to n_img = gaze_frame() * n, so a surface facing the camera has
  /// n_img.z <= 0 regardless of azimuth.
  Eigen::Matrix3d gaze_frame() const;

  /// World point to continuous image coords and depth. Returns false when the
  /// point cannot project (perspective point at or behind the camera plane).
  bool project(const Eigen::Vector3d& p, double& u, double& v, double& depth) const;

  /// Inverse of project for a given depth along the gaze.
  Eigen::Vector3d unproject(double u, double v, double depth) const;

  void validate() const;
};

/// Extrinsics for a camera at `eye` gazing at `target`: R rows are
/// [right; up; back] with back = normalize(eye - target), T = -R eye.
/// Throws InputError when eye == target or up is parallel to the gaze.
void look_at(const Eigen::Vector3d& eye, const Eigen::Vector3d& target, const Eigen::Vector3d& up,
             Eigen::Matrix3d& rotation, Eigen::Vector3d& translation);

}  // namespace hug
