#pragma once

#include <Eigen/Core>
#include <vector>

#include "hug/core/errors.hpp"

namespace hug {

/// Point cloud with per-point rgb in [0,1]. source_pixels optionally records
/// the integer pixel each point was lifted from, parallel to points.
struct ColoredPointCloud {
  std::vector<Eigen::Vector3d> points;
  std::vector<Eigen::Vector3d> colors;
  std::vector<Eigen::Vector2i> source_pixels;

  std::size_t size() const { return points.size(); }
  bool has_source_pixels() const { return !source_pixels.empty(); }

  void validate() const {
    if (colors.size() != points.size()) throw InputError("ColoredPointCloud: colors size mismatch");
    if (!source_pixels.empty() && source_pixels.size() != points.size())
      throw InputError("ColoredPointCloud: source_pixels size mismatch");
    for (const auto& p : points)
      if (!p.allFinite()) throw NumericalError("ColoredPointCloud: non-finite point");
    for (const auto& c : colors)
      if (!c.allFinite()) throw NumericalError("ColoredPointCloud: non-finite color");
  }
};

}  // namespace hug
