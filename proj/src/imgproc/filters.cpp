#include "hug/imgproc/filters.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <vector>

#include "hug/core/errors.hpp"

namespace hug::img {

namespace {

int clamp_coord(int v, int n) { return std::clamp(v, 0, n - 1); }

void require_single_channel(const ImageBuffer& image, const char* who) {
  if (image.channels != 1) throw InputError(std::string(who) + ": single-channel input required");
  if (image.width <= 0 || image.height <= 0) throw InputError(std::string(who) + ": empty image");
}

}  // namespace

ImageBuffer gaussian_blur(const ImageBuffer& image, double sigma) {
  require_single_channel(image, "gaussian_blur");
  if (!(sigma > 0.0)) return image;
  int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * r + 1);
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) {
    kernel[i + r] = std::exp(-0.5 * (i * i) / (sigma * sigma));
    sum += kernel[i + r];
  }
  for (double& k : kernel) k /= sum;

  ImageBuffer tmp = image, out = image;
  for (int y = 0; y < image.height; ++y)
    for (int x = 0; x < image.width; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += kernel[i + r] * image.at(clamp_coord(x + i, image.width), y);
      tmp.at(x, y) = static_cast<float>(acc);
    }
  for (int y = 0; y < image.height; ++y)
    for (int x = 0; x < image.width; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += kernel[i + r] * tmp.at(x, clamp_coord(y + i, image.height));
      out.at(x, y) = static_cast<float>(acc);
    }
  return out;
}

void sobel(const ImageBuffer& image, ImageBuffer& gx, ImageBuffer& gy) {
  require_single_channel(image, "sobel");
  gx = ImageBuffer(image.width, image.height, Semantic::Depth);
  gy = ImageBuffer(image.width, image.height, Semantic::Depth);
  auto px = [&](int x, int y) { return image.at(clamp_coord(x, image.width), clamp_coord(y, image.height)); };
  for (int y = 0; y < image.height; ++y)
    for (int x = 0; x < image.width; ++x) {
      double sx = (px(x + 1, y - 1) + 2.0 * px(x + 1, y) + px(x + 1, y + 1)) -
                  (px(x - 1, y - 1) + 2.0 * px(x - 1, y) + px(x - 1, y + 1));
      double sy = (px(x - 1, y + 1) + 2.0 * px(x, y + 1) + px(x + 1, y + 1)) -
                  (px(x - 1, y - 1) + 2.0 * px(x, y - 1) + px(x + 1, y - 1));
      gx.at(x, y) = static_cast<float>(sx / 8.0);
      gy.at(x, y) = static_cast<float>(sy / 8.0);
    }
}

ImageBuffer canny(const ImageBuffer& image, const CannyOptions& options) {
  require_single_channel(image, "canny");
  if (!(options.high >= options.low) || options.low < 0.0) throw InputError("canny: bad thresholds");
  ImageBuffer smooth = gaussian_blur(image, options.sigma);
  ImageBuffer gx, gy;
  sobel(smooth, gx, gy);

  int w = image.width, h = image.height;
  std::vector<double> mag(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      mag[static_cast<std::size_t>(y) * w + x] = std::hypot(gx.at(x, y), gy.at(x, y));

  // non-maximum suppression; gradient direction snapped to 4 sectors
  std::vector<std::uint8_t> state(static_cast<std::size_t>(w) * h, 0);  // 0 off, 1 weak, 2 strong
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double m = mag[static_cast<std::size_t>(y) * w + x];
      if (m < options.low) continue;
      double angle = std::atan2(gy.at(x, y), gx.at(x, y));
      if (angle < 0.0) angle += M_PI;
      int dx, dy;
      if (angle < M_PI / 8.0 || angle >= 7.0 * M_PI / 8.0) {
        dx = 1; dy = 0;
      } else if (angle < 3.0 * M_PI / 8.0) {
        dx = 1; dy = 1;
      } else if (angle < 5.0 * M_PI / 8.0) {
        dx = 0; dy = 1;
      } else {
        dx = -1; dy = 1;
      }
      auto m_at = [&](int xx, int yy) -> double {
        if (xx < 0 || xx >= w || yy < 0 || yy >= h) return 0.0;
        return mag[static_cast<std::size_t>(yy) * w + xx];
      };
      if (m < m_at(x + dx, y + dy) || m < m_at(x - dx, y - dy)) continue;
      state[static_cast<std::size_t>(y) * w + x] = m >= options.high ? 2 : 1;
    }

  // hysteresis: weak pixels survive when 8-connected to a strong one
  ImageBuffer edges(w, h, Semantic::Mask);
  std::deque<std::pair<int, int>> queue;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (state[static_cast<std::size_t>(y) * w + x] == 2) {
        edges.at(x, y) = 1.0f;
        queue.emplace_back(x, y);
      }
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        int xx = x + dx, yy = y + dy;
        if (xx < 0 || xx >= w || yy < 0 || yy >= h) continue;
        if (state[static_cast<std::size_t>(yy) * w + xx] == 1 && edges.at(xx, yy) == 0.0f) {
          edges.at(xx, yy) = 1.0f;
          queue.emplace_back(xx, yy);
        }
      }
  }
  return edges;
}

ImageBuffer normalize_over_mask(const ImageBuffer& image, const ImageBuffer& mask, float background) {
  require_single_channel(image, "normalize_over_mask");
  if (!image.same_shape(mask)) throw InputError("normalize_over_mask: shape mismatch");
  float lo = 0.0f, hi = 0.0f;
  bool any = false;
  for (int y = 0; y < image.height; ++y)
    for (int x = 0; x < image.width; ++x) {
      if (mask.at(x, y) == 0.0f) continue;
      float v = image.at(x, y);
      if (!any) {
        lo = hi = v;
        any = true;
      } else {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  ImageBuffer out(image.width, image.height, image.semantic, background);
  if (!any) return out;
  float span = hi - lo;
  for (int y = 0; y < image.height; ++y)
    for (int x = 0; x < image.width; ++x)
      if (mask.at(x, y) != 0.0f) out.at(x, y) = span > 0.0f ? (image.at(x, y) - lo) / span : 0.0f;
  return out;
}

}  // namespace hug::img
