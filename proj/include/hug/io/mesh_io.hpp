#pragma once

#include <filesystem>

#include "hug/core/mesh.hpp"
#include "hug/core/pointcloud.hpp"

namespace hug::io {

/// Wavefront OBJ; vertex colors use the common `v x y z r g b` extension.
/// Polygon faces are fan-triangulated on read; part labels do not survive OBJ.
void write_obj(const std::filesystem::path& path, const Mesh& mesh);
Mesh read_obj(const std::filesystem::path& path);

/// Binary little-endian PLY. Vertex properties: x y z, optional
/// red/green/blue (uchar), optional part_label (int). Faces are
/// `uchar int int int` vertex_indices lists.
void write_ply(const std::filesystem::path& path, const Mesh& mesh);
Mesh read_ply(const std::filesystem::path& path);

/// Point-cloud PLY (no face element), colors as uchar red/green/blue.
void write_ply(const std::filesystem::path& path, const ColoredPointCloud& cloud);
ColoredPointCloud read_ply_points(const std::filesystem::path& path);

}  // namespace hug::io
