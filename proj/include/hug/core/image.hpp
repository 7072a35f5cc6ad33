#pragma once

#include <cstdint>
#include <vector>

namespace hug {

/// What an ImageBuffer's channels mean. Depth and Mask and Instance are
/// single-channel, Rgb and Normal are three-channel.
enum class Semantic : std::uint8_t { Depth, Normal, Rgb, Mask, Instance };

/// Depth value written to pixels no surface covers.
constexpr float kDepthBackground = -1.0f;

/// Row-major, channel-interleaved float raster. (0,0) is the top-left pixel,
/// x grows right, y grows down. Rgb is [0,1], masks are {0,1}, instance ids
/// are small integers stored exactly, depth is metres along the camera gaze.
struct ImageBuffer {
  int width = 0;
  int height = 0;
  int channels = 1;
  Semantic semantic = Semantic::Mask;
  std::vector<float> data;

  ImageBuffer() = default;
  ImageBuffer(int w, int h, Semantic sem, float fill = 0.0f);

  static int channels_for(Semantic sem);

  float& at(int x, int y, int c = 0) { return data[(static_cast<std::size_t>(y) * width + x) * channels + c]; }
  const float& at(int x, int y, int c = 0) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }

  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
  bool same_shape(const ImageBuffer& other) const {
    return width == other.width && height == other.height && channels == other.channels;
  }

  /// Throws InputError on shape/semantic mismatch or NumericalError on
  /// non-finite data.
  void validate() const;
};

/// Fraction of nonzero pixels (first channel).
double mask_coverage(const ImageBuffer& mask);

}  // namespace hug
