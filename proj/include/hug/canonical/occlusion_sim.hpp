#pragma once

#include <cstdint>
#include <vector>

#include "hug/core/image.hpp"

namespace hug::canonical {

enum class OcclusionKind { Silhouette, Freeform };

/// Binary human-figure templates on a 256x256 canvas, each filling 33..58%
/// of it so a placed silhouette lands in the 5..60% image-area band at any
/// admissible scale. These are the masters behind the shipped PNG assets.
std::vector<ImageBuffer> builtin_silhouette_templates();
constexpr int kSilhouetteTemplateSize = 256;

/// Occluder mask for a square image. Silhouette kind drops a random template
/// scaled to `scale` x image height (sampled uniformly from [0.4, 1.0] when
/// scale < 0, clamped into that range otherwise) at the image center
/// jittered by +-15%. Freeform kind stamps random-walk brush strokes.
/// Deterministic for a fixed seed.
ImageBuffer simulate_occlusion_mask(int image_size, OcclusionKind kind, std::uint64_t rng_seed, double scale = -1.0);

/// Morphological dilation with a square structuring element; kernel must be
/// odd.
ImageBuffer dilate_mask(const ImageBuffer& mask, int kernel_size);

}  // namespace hug::canonical
