#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstddef>
#include <vector>

namespace hug::opt {

/// Adam over per-vertex 3-vectors with optional per-vertex learning-rate
/// scales. Elementwise moments, bias correction, update
///   x -= lr * scale_v * m^ / (sqrt(v^) + eps).
class Adam {
public:
  explicit Adam(std::size_t n, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : beta1_(beta1), beta2_(beta2), eps_(eps), m_(n, Eigen::Vector3d::Zero()), v_(n, Eigen::Vector3d::Zero()) {}

  void step(std::vector<Eigen::Vector3d>& positions, const std::vector<Eigen::Vector3d>& grad, double lr,
            const std::vector<double>* lr_scale = nullptr) {
    ++t_;
    double c1 = 1.0 - std::pow(beta1_, t_);
    double c2 = 1.0 - std::pow(beta2_, t_);
    for (std::size_t i = 0; i < positions.size(); ++i) {
      m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
      v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i].cwiseProduct(grad[i]);
      double step_lr = lr * (lr_scale ? (*lr_scale)[i] : 1.0);
      Eigen::Vector3d mhat = m_[i] / c1;
      Eigen::Vector3d vhat = v_[i] / c2;
      positions[i] -= step_lr * (mhat.array() / (vhat.array().sqrt() + eps_)).matrix();
    }
  }

  void reset() {
    t_ = 0;
    for (auto& m : m_) m.setZero();
    for (auto& v : v_) v.setZero();
  }

private:
  double beta1_, beta2_, eps_;
  int t_ = 0;
  std::vector<Eigen::Vector3d> m_, v_;
};

}  // namespace hug::opt
