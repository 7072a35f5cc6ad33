#include "hug/core/image.hpp"

#include <cmath>

#include "hug/core/errors.hpp"

namespace hug {

int ImageBuffer::channels_for(Semantic sem) {
  switch (sem) {
    case Semantic::Rgb:
    case Semantic::Normal:
      return 3;
    default:
      return 1;
  }
}

ImageBuffer::ImageBuffer(int w, int h, Semantic sem, float fill)
    : width(w), height(h), channels(channels_for(sem)), semantic(sem) {
  if (w <= 0 || h <= 0) throw InputError("ImageBuffer: non-positive dimensions");
  data.assign(static_cast<std::size_t>(w) * h * channels, fill);
}

void ImageBuffer::validate() const {
  if (width <= 0 || height <= 0) throw InputError("ImageBuffer: non-positive dimensions");
  if (channels != channels_for(semantic)) throw InputError("ImageBuffer: channel count does not match semantic");
  if (data.size() != static_cast<std::size_t>(width) * height * channels)
    throw InputError("ImageBuffer: data size does not match dimensions");
  for (float v : data)
    if (!std::isfinite(v)) throw NumericalError("ImageBuffer: non-finite pixel value");
  if (semantic == Semantic::Mask) {
    for (float v : data)
      if (v != 0.0f && v != 1.0f) throw InputError("ImageBuffer: mask values must be 0 or 1");
  }
}

double mask_coverage(const ImageBuffer& mask) {
  if (mask.pixel_count() == 0) return 0.0;
  std::size_t on = 0;
  for (std::size_t i = 0; i < mask.pixel_count(); ++i)
    if (mask.data[i * mask.channels] != 0.0f) ++on;
  return static_cast<double>(on) / static_cast<double>(mask.pixel_count());
}

}  // namespace hug
