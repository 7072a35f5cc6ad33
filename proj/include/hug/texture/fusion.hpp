#pragma once

#include <cstdint>
#include <vector>

#include "hug/core/camera.hpp"
#include "hug/core/image.hpp"
#include "hug/core/mesh.hpp"

namespace hug::texture {

/// One view's contribution to the blend: the binary confidence mask cut from
/// its depth map, the source image, and the resolved per-vertex weights.
/// Weights are zero for vertices the view cannot see.
struct ViewContribution {
  int view_index = 0;
  ImageBuffer confidence_mask;
  ImageBuffer rgb;
  std::vector<double> per_vertex_weight;
};

/// Binary confidence: foreground pixels sufficiently distant from depth
/// discontinuities. Canny runs on depth normalized over the foreground
/// (background 0, so the silhouette rim registers as a discontinuity too),
/// the edge set is dilated by dilate_kernel, and the dilated zone is cut
/// from the foreground.
ImageBuffer edge_confidence_mask(const ImageBuffer& depth, const ImageBuffer& fg_mask, int dilate_kernel = 21);

/// One source view for fusion. Foreground is taken as depth > 0 (background
/// pixels hold the depth sentinel).
struct FusionView {
  Camera camera;
  ImageBuffer rgb;
  ImageBuffer depth;
};

/// Projects every view's image onto the mesh and blends per vertex. A view
/// contributes to a vertex iff the vertex is visible there (rig_visibility,
/// one flag vector per view from render::vertex_visibility), projects inside
/// the frame, and lands on a confident pixel; its weight is
/// max(0, <vertex normal, direction toward the camera>). Colors are sampled
/// bilinearly and normalized per vertex. Vertices no view colored take the
/// nearest colored vertex along mesh edges (breadth first); a mesh no view
/// sees at all comes back uniform gray 0.5 with *unseen_warning raised.
Mesh fuse_texture(const Mesh& mesh, const std::vector<FusionView>& views,
                  const std::vector<std::vector<std::uint8_t>>& rig_visibility, int dilate_kernel = 21,
                  bool* unseen_warning = nullptr, std::vector<ViewContribution>* contributions = nullptr);

}  // namespace hug::texture
