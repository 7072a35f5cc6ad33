#include "hug/canonical/occlusion_sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hug/core/errors.hpp"
#include "hug/imgproc/morphology.hpp"

namespace hug::canonical {

namespace {

constexpr int kT = kSilhouetteTemplateSize;

void fill_ellipse(ImageBuffer& img, double cx, double cy, double rx, double ry) {
  int x0 = std::max(0, static_cast<int>(std::floor(cx - rx)));
  int x1 = std::min(img.width - 1, static_cast<int>(std::ceil(cx + rx)));
  int y0 = std::max(0, static_cast<int>(std::floor(cy - ry)));
  int y1 = std::min(img.height - 1, static_cast<int>(std::ceil(cy + ry)));
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) {
      double dx = (x + 0.5 - cx) / rx, dy = (y + 0.5 - cy) / ry;
      if (dx * dx + dy * dy <= 1.0) img.at(x, y) = 1.0f;
    }
}

void fill_capsule(ImageBuffer& img, double x0, double y0, double x1, double y1, double r) {
  double lo_x = std::min(x0, x1) - r, hi_x = std::max(x0, x1) + r;
  double lo_y = std::min(y0, y1) - r, hi_y = std::max(y0, y1) + r;
  int px0 = std::max(0, static_cast<int>(std::floor(lo_x)));
  int px1 = std::min(img.width - 1, static_cast<int>(std::ceil(hi_x)));
  int py0 = std::max(0, static_cast<int>(std::floor(lo_y)));
  int py1 = std::min(img.height - 1, static_cast<int>(std::ceil(hi_y)));
  double ux = x1 - x0, uy = y1 - y0;
  double len2 = ux * ux + uy * uy;
  for (int y = py0; y <= py1; ++y)
    for (int x = px0; x <= px1; ++x) {
      double px = x + 0.5, py = y + 0.5;
      double t = len2 > 0.0 ? std::clamp(((px - x0) * ux + (py - y0) * uy) / len2, 0.0, 1.0) : 0.0;
      double dx = px - (x0 + t * ux), dy = py - (y0 + t * uy);
      if (dx * dx + dy * dy <= r * r) img.at(x, y) = 1.0f;
    }
}

ImageBuffer blank_template() { return ImageBuffer(kT, kT, Semantic::Mask, 0.0f); }

// Bulky hooded figure.
ImageBuffer template_cloak() {
  ImageBuffer t = blank_template();
  fill_ellipse(t, 128, 46, 36, 42);
  fill_capsule(t, 128, 80, 128, 110, 26);
  fill_ellipse(t, 128, 170, 82, 102);
  return t;
}

// Wide stance with arms straight out.
ImageBuffer template_arms_out() {
  ImageBuffer t = blank_template();
  fill_ellipse(t, 128, 36, 30, 32);
  fill_capsule(t, 128, 72, 128, 168, 48);
  fill_capsule(t, 22, 104, 234, 104, 19);
  fill_capsule(t, 102, 168, 64, 246, 27);
  fill_capsule(t, 154, 168, 192, 246, 27);
  return t;
}

// Hands on hips, elbows out.
ImageBuffer template_hips() {
  ImageBuffer t = blank_template();
  fill_ellipse(t, 128, 40, 32, 34);
  fill_ellipse(t, 128, 152, 62, 94);
  fill_capsule(t, 118, 84, 52, 148, 17);
  fill_capsule(t, 52, 148, 104, 198, 15);
  fill_capsule(t, 138, 84, 204, 148, 17);
  fill_capsule(t, 204, 148, 152, 198, 15);
  fill_capsule(t, 104, 244, 104, 200, 24);
  fill_capsule(t, 152, 244, 152, 200, 24);
  return t;
}

// Seated figure, legs folded across.
ImageBuffer template_seated() {
  ImageBuffer t = blank_template();
  fill_ellipse(t, 128, 52, 34, 36);
  fill_ellipse(t, 128, 148, 66, 78);
  fill_capsule(t, 62, 208, 194, 208, 40);
  return t;
}

// Arms raised in a V.
ImageBuffer template_arms_up() {
  ImageBuffer t = blank_template();
  fill_ellipse(t, 128, 58, 30, 32);
  fill_capsule(t, 128, 92, 128, 188, 50);
  fill_capsule(t, 120, 96, 54, 12, 21);
  fill_capsule(t, 136, 96, 202, 12, 21);
  fill_capsule(t, 104, 188, 86, 248, 25);
  fill_capsule(t, 152, 188, 170, 248, 25);
  return t;
}

// Broad child-like proportions.
ImageBuffer template_child() {
  ImageBuffer t = blank_template();
  fill_ellipse(t, 128, 62, 46, 50);
  fill_ellipse(t, 128, 178, 74, 78);
  return t;
}

}  // namespace

std::vector<ImageBuffer> builtin_silhouette_templates() {
  std::vector<ImageBuffer> out;
  out.push_back(template_cloak());
  out.push_back(template_arms_out());
  out.push_back(template_hips());
  out.push_back(template_seated());
  out.push_back(template_arms_up());
  out.push_back(template_child());
  return out;
}

ImageBuffer simulate_occlusion_mask(int image_size, OcclusionKind kind, std::uint64_t rng_seed, double scale) {
  if (image_size < 1) throw InputError("simulate_occlusion_mask: image_size must be positive");
  ImageBuffer mask(image_size, image_size, Semantic::Mask, 0.0f);
  std::mt19937_64 rng(rng_seed);

  if (kind == OcclusionKind::Silhouette) {
    static const std::vector<ImageBuffer> templates = builtin_silhouette_templates();
    std::uniform_int_distribution<std::size_t> pick(0, templates.size() - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const ImageBuffer& tpl = templates[pick(rng)];
    double s = scale < 0.0 ? 0.4 + 0.6 * unit(rng) : std::clamp(scale, 0.4, 1.0);
    double jx = (unit(rng) * 2.0 - 1.0) * 0.15 * image_size;
    double jy = (unit(rng) * 2.0 - 1.0) * 0.15 * image_size;
    double cx = image_size / 2.0 + jx, cy = image_size / 2.0 + jy;
    double f = s * image_size / static_cast<double>(kT);
    for (int y = 0; y < image_size; ++y)
      for (int x = 0; x < image_size; ++x) {
        int tx = static_cast<int>(std::floor((x + 0.5 - cx) / f + kT / 2.0));
        int ty = static_cast<int>(std::floor((y + 0.5 - cy) / f + kT / 2.0));
        if (tx < 0 || tx >= kT || ty < 0 || ty >= kT) continue;
        if (tpl.at(tx, ty) > 0.5f) mask.at(x, y) = 1.0f;
      }
    return mask;
  }

  // freeform: brush strokes following a drifting random walk
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> stroke_count(6, 10);
  int strokes = stroke_count(rng);
  double step = image_size / 64.0;
  for (int s = 0; s < strokes; ++s) {
    double x = image_size * (0.2 + 0.6 * unit(rng));
    double y = image_size * (0.2 + 0.6 * unit(rng));
    double angle = unit(rng) * 2.0 * M_PI;
    double radius = image_size * (1.0 / 40.0 + unit(rng) * (1.0 / 16.0 - 1.0 / 40.0));
    int steps = 40 + static_cast<int>(unit(rng) * 40.0);
    for (int k = 0; k < steps; ++k) {
      double nx = x + step * std::cos(angle);
      double ny = y + step * std::sin(angle);
      fill_capsule(mask, x, y, nx, ny, radius);
      x = std::clamp(nx, 0.0, static_cast<double>(image_size));
      y = std::clamp(ny, 0.0, static_cast<double>(image_size));
      angle += (unit(rng) - 0.5);
    }
  }
  return mask;
}

ImageBuffer dilate_mask(const ImageBuffer& mask, int kernel_size) { return img::dilate(mask, kernel_size); }

}  // namespace hug::canonical
