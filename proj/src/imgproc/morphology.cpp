#include "hug/imgproc/morphology.hpp"

#include <algorithm>

#include "hug/core/errors.hpp"

namespace hug::img {

namespace {

// Separable pass: out(x,y) = op over the k-window along one axis.
// `hit` is the value we dilate with / erode against.
ImageBuffer sweep(const ImageBuffer& mask, int k, bool horizontal, bool dilate_mode) {
  int r = k / 2;
  ImageBuffer out(mask.width, mask.height, Semantic::Mask);
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x) {
      bool acc = !dilate_mode;
      for (int i = -r; i <= r; ++i) {
        int xx = horizontal ? x + i : x;
        int yy = horizontal ? y : y + i;
        bool v = false;  // outside the frame counts as background
        if (xx >= 0 && xx < mask.width && yy >= 0 && yy < mask.height) v = mask.at(xx, yy) != 0.0f;
        if (dilate_mode)
          acc = acc || v;
        else
          acc = acc && v;
      }
      out.at(x, y) = acc ? 1.0f : 0.0f;
    }
  return out;
}

void check(const ImageBuffer& mask, int k, const char* who) {
  if (mask.channels != 1) throw InputError(std::string(who) + ": single-channel mask required");
  if (k < 1 || k % 2 == 0) throw InputError(std::string(who) + ": kernel size must be odd and positive");
}

}  // namespace

ImageBuffer dilate(const ImageBuffer& mask, int k) {
  check(mask, k, "dilate");
  if (k == 1) return mask;
  return sweep(sweep(mask, k, true, true), k, false, true);
}

ImageBuffer erode(const ImageBuffer& mask, int k) {
  check(mask, k, "erode");
  if (k == 1) return mask;
  return sweep(sweep(mask, k, true, false), k, false, false);
}

}  // namespace hug::img
