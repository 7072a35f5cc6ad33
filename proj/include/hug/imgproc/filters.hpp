#pragma once

#include "hug/core/image.hpp"

namespace hug::img {

/// Separable Gaussian blur, kernel half-width ceil(3*sigma), edge-clamped.
/// Single-channel buffers only.
ImageBuffer gaussian_blur(const ImageBuffer& image, double sigma);

/// 3x3 Sobel gradients (1/8-normalised so responses approximate true
/// derivatives), edge-clamped.
void sobel(const ImageBuffer& image, ImageBuffer& gx, ImageBuffer& gy);

struct CannyOptions {
  double sigma = 1.0;
  double low = 0.05;   // hysteresis thresholds on gradient magnitude
  double high = 0.15;  // of a [0,1]-normalised input
};

/// Canny edges: Gaussian blur, Sobel, 4-sector non-maximum suppression,
/// hysteresis (8-connected). Returns a {0,1} mask.
ImageBuffer canny(const ImageBuffer& image, const CannyOptions& options = {});

/// Affine-rescales values where mask is on to [0,1] (constant regions map to
/// 0); pixels off the mask become `background`.
ImageBuffer normalize_over_mask(const ImageBuffer& image, const ImageBuffer& mask, float background = 0.0f);

}  // namespace hug::img
