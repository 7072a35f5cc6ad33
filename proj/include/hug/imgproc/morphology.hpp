#pragma once

#include "hug/core/image.hpp"

namespace hug::img {

/// Binary dilation by a k x k square structuring element (k odd, centred).
/// Pixels outside the image count as background.
ImageBuffer dilate(const ImageBuffer& mask, int k);

/// Binary erosion by a k x k square structuring element (k odd, centred).
/// Pixels outside the image count as background, so the frame erodes inward.
ImageBuffer erode(const ImageBuffer& mask, int k);

}  // namespace hug::img
