#include "hug/latent/latent_ops.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "hug/core/errors.hpp"
#include "hug/io/atomic_file.hpp"

namespace hug::latent {

void LatentGrid::validate() const {
  if (height < 1 || width < 1 || channels < 1) throw InputError("LatentGrid: non-positive shape");
  if (data.size() != cell_count() * channels) throw InputError("LatentGrid: data size mismatch");
  for (float v : data)
    if (!std::isfinite(v)) throw NumericalError("LatentGrid: non-finite value");
}

void RegionMask::validate() const {
  if (height < 1 || width < 1) throw InputError("RegionMask: non-positive shape");
  if (data.size() != static_cast<std::size_t>(height) * width) throw InputError("RegionMask: data size mismatch");
  for (std::uint8_t v : data)
    if (v > 1) throw InputError("RegionMask: values must be 0 or 1");
}

LatentGrid compose_instance_to_group(const LatentGrid& group,
                                     const std::vector<std::pair<LatentGrid, RegionMask>>& instances,
                                     double alpha, bool literal_sum) {
  group.validate();
  if (alpha < 0.0 || alpha > 1.0) throw InputError("compose_instance_to_group: alpha outside [0,1]");
  for (const auto& [grid, mask] : instances) {
    grid.validate();
    mask.validate();
    if (!grid.same_shape(group)) throw InputError("compose_instance_to_group: instance grid shape mismatch");
    if (mask.height != group.height || mask.width != group.width)
      throw InputError("compose_instance_to_group: mask shape mismatch");
  }

  LatentGrid out = group;
  float a = static_cast<float>(alpha);
  if (literal_sum) {
    // literal summed form: deltas accumulate, so overlaps double-count and
    // the result can leave the inputs' range
    for (const auto& [grid, mask] : instances)
      for (std::size_t i = 0; i < group.cell_count(); ++i) {
        if (!mask.data[i]) continue;
        for (int c = 0; c < group.channels; ++c) {
          std::size_t k = i * group.channels + c;
          out.data[k] += a * (grid.data[k] - group.data[k]);
        }
      }
    return out;
  }
  // priority order: every covered cell blends against the original group
  // value, so the last instance covering a cell wins outright
  for (const auto& [grid, mask] : instances)
    for (std::size_t i = 0; i < group.cell_count(); ++i) {
      if (!mask.data[i]) continue;
      for (int c = 0; c < group.channels; ++c) {
        std::size_t k = i * group.channels + c;
        out.data[k] = a * grid.data[k] + (1.0f - a) * group.data[k];
      }
    }
  return out;
}

LatentGrid inject_partial_rgb(const LatentGrid& current, const LatentGrid& raw_noisy, const RegionMask& mask,
                              double alpha_pcd) {
  current.validate();
  raw_noisy.validate();
  mask.validate();
  if (!current.same_shape(raw_noisy)) throw InputError("inject_partial_rgb: grid shape mismatch");
  if (mask.height != current.height || mask.width != current.width)
    throw InputError("inject_partial_rgb: mask shape mismatch");
  if (alpha_pcd < 0.0 || alpha_pcd > 1.0) throw InputError("inject_partial_rgb: alpha_pcd outside [0,1]");

  LatentGrid out = current;
  float a = static_cast<float>(alpha_pcd);
  for (std::size_t i = 0; i < current.cell_count(); ++i) {
    if (!mask.data[i]) continue;
    for (int c = 0; c < current.channels; ++c) {
      std::size_t k = i * current.channels + c;
      out.data[k] = a * raw_noisy.data[k] + (1.0f - a) * current.data[k];
    }
  }
  return out;
}

RegionMask downsample_mask_to_latent(const ImageBuffer& mask, int latent_height, int latent_width) {
  if (latent_height < 1 || latent_width < 1) throw InputError("downsample_mask_to_latent: non-positive latent size");
  if (mask.height % latent_height != 0 || mask.width % latent_width != 0)
    throw InputError("downsample_mask_to_latent: image size is not an integer multiple of the latent size");
  int bh = mask.height / latent_height, bw = mask.width / latent_width;
  RegionMask out(latent_height, latent_width, 0);
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x)
      if (mask.at(x, y) > 0.5f) out.at(x / bw, y / bh) = 1;
  return out;
}

void save_latent(const LatentGrid& grid, const std::string& path) {
  grid.validate();
  std::string payload;
  payload.reserve(12 + grid.data.size() * 4);
  auto put32 = [&payload](std::int32_t v) {
    char b[4];
    std::memcpy(b, &v, 4);
    payload.append(b, 4);
  };
  put32(grid.height);
  put32(grid.width);
  put32(grid.channels);
  payload.append(reinterpret_cast<const char*>(grid.data.data()), grid.data.size() * 4);
  io::atomic_write_text(path, payload);
}

LatentGrid load_latent(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("load_latent: cannot open " + path);
  std::int32_t shape[3];
  if (!in.read(reinterpret_cast<char*>(shape), 12)) throw InputError("load_latent: truncated header");
  if (shape[0] < 1 || shape[1] < 1 || shape[2] < 1) throw InputError("load_latent: invalid shape");
  LatentGrid grid(shape[0], shape[1], shape[2]);
  if (!in.read(reinterpret_cast<char*>(grid.data.data()), static_cast<std::streamsize>(grid.data.size() * 4)))
    throw InputError("load_latent: truncated payload");
  grid.validate();
  return grid;
}

}  // namespace hug::latent
