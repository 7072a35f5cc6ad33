#include "hug/core/camera.hpp"

#include <Eigen/Geometry>

#include <cmath>

#include "hug/core/errors.hpp"

namespace hug {

Eigen::Matrix3d Camera::gaze_frame() const {
  Eigen::Matrix3d g;
  g.row(0) = rotation.row(0);
  g.row(1) = rotation.row(1);
  g.row(2) = -rotation.row(2);
  return g;
}

bool Camera::project(const Eigen::Vector3d& p, double& u, double& v, double& depth) const {
  Eigen::Vector3d pc = to_camera(p);
  depth = -pc.z();
  if (mode == Mode::Perspective) {
    if (depth <= 0.0) return false;
    u = cx + fx * pc.x() / depth;
    v = cy - fy * pc.y() / depth;
  } else {
    u = cx + pc.x() / scale;
    v = cy - pc.y() / scale;
  }
  return true;
}

Eigen::Vector3d Camera::unproject(double u, double v, double depth) const {
  Eigen::Vector3d pc;
  if (mode == Mode::Perspective) {
    pc.x() = (u - cx) * depth / fx;
    pc.y() = -(v - cy) * depth / fy;
  } else {
    pc.x() = (u - cx) * scale;
    pc.y() = -(v - cy) * scale;
  }
  pc.z() = -depth;
  return rotation.transpose() * (pc - translation);
}

void Camera::validate() const {
  if (width <= 0 || height <= 0) throw InputError("Camera: non-positive image size");
  if (mode == Mode::Perspective) {
    if (!(fx > 0.0) || !(fy > 0.0)) throw InputError("Camera: perspective needs positive focal lengths");
  } else {
    if (!(scale > 0.0)) throw InputError("Camera: orthographic needs positive scale");
  }
  if (!rotation.allFinite() || !translation.allFinite()) throw NumericalError("Camera: non-finite extrinsics");
  Eigen::Matrix3d rtr = rotation.transpose() * rotation;
  if ((rtr - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-6)
    throw InputError("Camera: rotation is not orthonormal");
  if (rotation.determinant() < 0.0) throw InputError("Camera: rotation is reflected");
}

void look_at(const Eigen::Vector3d& eye, const Eigen::Vector3d& target, const Eigen::Vector3d& up,
             Eigen::Matrix3d& rotation, Eigen::Vector3d& translation) {
  Eigen::Vector3d back = eye - target;
  double n = back.norm();
  if (n < 1e-12) throw InputError("look_at: eye and target coincide");
  back /= n;
  Eigen::Vector3d right = up.cross(back);
  double rn = right.norm();
  if (rn < 1e-12) throw InputError("look_at: up is parallel to the gaze");
  right /= rn;
  Eigen::Vector3d true_up = back.cross(right);
  rotation.row(0) = right;
  rotation.row(1) = true_up;
  rotation.row(2) = back;
  translation = -rotation * eye;
}

}  // namespace hug
