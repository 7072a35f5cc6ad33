#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hug/core/camera.hpp"
#include "hug/core/image.hpp"
#include "hug/core/mesh.hpp"

namespace hug::render {

struct RasterizeOptions {
  bool rgb = false;           // interpolate vertex colors (missing colors render grey)
  bool parts = false;         // carry per-pixel part labels of the winning face
  bool barycentrics = false;  // keep per-pixel weights and normal flip signs
  int threads = 0;            // 0 = auto (HUG_GEOM_THREADS, then hardware)
};

/// Buffers produced by one rasterization pass. Pixels nothing covers hold
/// depth -1, zero normal, instance 0, face index -1. Normals live in the
/// camera's gaze frame (right/up/gaze) and are flipped per pixel so the
/// visible side satisfies n.z <= 0.
struct RenderOutput {
  int width = 0, height = 0;
  ImageBuffer depth;
  ImageBuffer normal;
  ImageBuffer instance_map;
  std::optional<ImageBuffer> rgb;
  std::vector<std::int32_t> face_index_map;  // scene-global face id, -1 background
  std::vector<std::int32_t> part_label;  // 0 where absent; filled when options.parts
  std::vector<float> bary;               // 3 floats per covered pixel slot; options.barycentrics
  std::vector<float> normal_flip;        // +1 / -1 per pixel; options.barycentrics

  ImageBuffer foreground_mask() const;
  ImageBuffer instance_mask(int instance_id) const;
  /// Binary mask of pixels whose winning face belongs to (instance, part).
  /// Masks for different (instance, part) pairs are disjoint by construction.
  ImageBuffer part_mask(int instance_id, std::int32_t part) const;
};

/// Scene-global face ids are local face indices offset by the face count of
/// all earlier instances; same scheme for vertices.
std::vector<std::size_t> face_offsets(const Scene& scene);
std::vector<std::size_t> vertex_offsets(const Scene& scene);

/// Rasterizes every instance into shared buffers. Depth and attributes use
/// screen-space (affine) barycentric interpolation at pixel centres with a
/// top-left fill rule; the nearest fragment wins, equal depths resolve to the
/// smaller scene-global face id. Perspective faces with any vertex at or
/// behind the camera plane are skipped. Output is identical for every thread
/// count.
RenderOutput rasterize(const Scene& scene, const Camera& camera, const RasterizeOptions& options = {});

/// A vertex is visible when it projects inside the image and is not behind
/// the scene depth buffer at the containing pixel by more than eps. Choose
/// eps to absorb the depth variation across a pixel footprint (the buffer
/// records the depth at the pixel center, the vertex projects off-center);
/// a couple of pixel footprints works for moderately sloped surfaces.
std::vector<std::uint8_t> vertex_visibility(const Mesh& mesh, const Camera& camera, const ImageBuffer& scene_depth,
                                            double eps = 1e-3);

}  // namespace hug::render
