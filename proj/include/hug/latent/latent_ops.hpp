#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hug/core/image.hpp"

namespace hug::latent {

/// Dense latent-resolution grid. view_index and timestep are bookkeeping
/// carried through the algebra untouched.
struct LatentGrid {
  int height = 0;
  int width = 0;
  int channels = 0;
  int view_index = 0;
  int timestep = 0;
  std::vector<float> data;  // row-major, channel-interleaved

  LatentGrid() = default;
  LatentGrid(int h, int w, int c, float fill = 0.0f)
      : height(h), width(w), channels(c), data(static_cast<std::size_t>(h) * w * c, fill) {}

  float& at(int x, int y, int c) { return data[(static_cast<std::size_t>(y) * width + x) * channels + c]; }
  float at(int x, int y, int c) const { return data[(static_cast<std::size_t>(y) * width + x) * channels + c]; }
  std::size_t cell_count() const { return static_cast<std::size_t>(height) * width; }
  bool same_shape(const LatentGrid& o) const {
    return height == o.height && width == o.width && channels == o.channels;
  }
  void validate() const;
};

/// Binary mask at latent resolution.
struct RegionMask {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> data;

  RegionMask() = default;
  RegionMask(int h, int w, std::uint8_t fill = 0) : height(h), width(w), data(static_cast<std::size_t>(h) * w, fill) {}

  std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  void validate() const;
};

constexpr double kDefaultAlpha = 0.8;

/// Instance-to-group composition: inside each instance mask the cell becomes
/// alpha*z_inst + (1-alpha)*z_group, outside it stays z_group. Overlapping
/// masks are resolved by priority (instances applied in order, later wins).
/// `literal_sum` switches to the literal summed form, which double-counts
/// overlaps and can leave the inputs' range.
LatentGrid compose_instance_to_group(const LatentGrid& group,
                                     const std::vector<std::pair<LatentGrid, RegionMask>>& instances,
                                     double alpha = kDefaultAlpha, bool literal_sum = false);

/// Partial-RGB injection: z <- m*[alpha*raw + (1-alpha)*z] + (1-m)*z.
LatentGrid inject_partial_rgb(const LatentGrid& current, const LatentGrid& raw_noisy, const RegionMask& mask,
                              double alpha_pcd = kDefaultAlpha);

/// Block-max pooling of a pixel mask down to latent resolution; the image
/// size must be an integer multiple of the latent size.
RegionMask downsample_mask_to_latent(const ImageBuffer& mask, int latent_height, int latent_width);

/// Raw little-endian float32 serialization with a 12-byte (h, w, c) header.
void save_latent(const LatentGrid& grid, const std::string& path);
LatentGrid load_latent(const std::string& path);

}  // namespace hug::latent
