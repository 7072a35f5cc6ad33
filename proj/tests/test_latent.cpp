#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>

#include "hug/core/errors.hpp"
#include "hug/core/image.hpp"
#include "hug/latent/latent_ops.hpp"

using namespace hug;
namespace fs = std::filesystem;

namespace {

latent::LatentGrid random_grid(std::mt19937_64& rng, int h, int w, int c) {
  latent::LatentGrid grid(h, w, c);
  std::uniform_real_distribution<float> value(-2.0f, 2.0f);
  for (auto& v : grid.data) v = value(rng);
  return grid;
}

latent::RegionMask random_mask(std::mt19937_64& rng, int h, int w, double density = 0.4) {
  latent::RegionMask mask(h, w);
  std::bernoulli_distribution on(density);
  for (auto& v : mask.data) v = on(rng) ? 1 : 0;
  return mask;
}

}  // namespace

TEST_CASE("the scalar composition example is exact") {
  latent::LatentGrid group(1, 1, 1, 0.0f);
  latent::LatentGrid inst(1, 1, 1, 10.0f);
  latent::RegionMask mask(1, 1, 1);
  latent::LatentGrid out = latent::compose_instance_to_group(group, {{inst, mask}}, 0.8);
  CHECK(out.at(0, 0, 0) == 8.0f);  // 0.8*10 + 0.2*0, exact in float
}

TEST_CASE("composition with alpha 0 is the identity") {
  std::mt19937_64 rng(1);
  latent::LatentGrid group = random_grid(rng, 8, 8, 4);
  latent::LatentGrid inst = random_grid(rng, 8, 8, 4);
  latent::RegionMask mask = random_mask(rng, 8, 8);
  latent::LatentGrid out = latent::compose_instance_to_group(group, {{inst, mask}}, 0.0);
  CHECK(out.data == group.data);
}

TEST_CASE("composition with alpha 1 replaces inside the mask") {
  std::mt19937_64 rng(2);
  latent::LatentGrid group = random_grid(rng, 8, 8, 4);
  latent::LatentGrid inst = random_grid(rng, 8, 8, 4);
  latent::RegionMask mask = random_mask(rng, 8, 8);
  latent::LatentGrid out = latent::compose_instance_to_group(group, {{inst, mask}}, 1.0);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x)
      for (int c = 0; c < 4; ++c)
        CHECK(out.at(x, y, c) == (mask.at(x, y) ? inst.at(x, y, c) : group.at(x, y, c)));
}

TEST_CASE("composition only touches masked cells and stays convex") {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 50; ++round) {
    latent::LatentGrid group = random_grid(rng, 6, 9, 3);
    latent::LatentGrid inst = random_grid(rng, 6, 9, 3);
    latent::RegionMask mask = random_mask(rng, 6, 9);
    std::uniform_real_distribution<double> alpha_dist(0.0, 1.0);
    double alpha = alpha_dist(rng);
    latent::LatentGrid out = latent::compose_instance_to_group(group, {{inst, mask}}, alpha);
    for (int y = 0; y < 6; ++y)
      for (int x = 0; x < 9; ++x)
        for (int c = 0; c < 3; ++c) {
          float g = group.at(x, y, c), z = inst.at(x, y, c), o = out.at(x, y, c);
          if (!mask.at(x, y)) {
            CHECK(o == g);
          } else {
            CHECK(o >= std::min(g, z) - 1e-6f);
            CHECK(o <= std::max(g, z) + 1e-6f);
          }
        }
  }
}

TEST_CASE("disjoint masks decompose into sequential compositions") {
  std::mt19937_64 rng(4);
  for (int round = 0; round < 20; ++round) {
    latent::LatentGrid group = random_grid(rng, 7, 7, 2);
    latent::LatentGrid inst_a = random_grid(rng, 7, 7, 2);
    latent::LatentGrid inst_b = random_grid(rng, 7, 7, 2);
    // split the grid into left/right halves: disjoint by construction
    latent::RegionMask mask_a(7, 7), mask_b(7, 7);
    for (int y = 0; y < 7; ++y)
      for (int x = 0; x < 7; ++x) (x < 3 ? mask_a : mask_b).at(x, y) = 1;

    latent::LatentGrid joint =
        latent::compose_instance_to_group(group, {{inst_a, mask_a}, {inst_b, mask_b}}, 0.8);
    latent::LatentGrid seq = latent::compose_instance_to_group(group, {{inst_a, mask_a}}, 0.8);
    seq = latent::compose_instance_to_group(seq, {{inst_b, mask_b}}, 0.8);
    CHECK(joint.data == seq.data);
  }
}

TEST_CASE("overlapping masks resolve by priority, later instance wins") {
  latent::LatentGrid group(2, 2, 1, 0.0f);
  latent::LatentGrid first(2, 2, 1, 10.0f);
  latent::LatentGrid second(2, 2, 1, 20.0f);
  latent::RegionMask both(2, 2, 1);
  latent::LatentGrid out = latent::compose_instance_to_group(group, {{first, both}, {second, both}}, 1.0);
  for (float v : out.data) CHECK(v == 20.0f);
}

TEST_CASE("the literal summed form double-counts overlaps") {
  latent::LatentGrid group(1, 1, 1, 1.0f);
  latent::LatentGrid a(1, 1, 1, 10.0f);
  latent::LatentGrid b(1, 1, 1, 20.0f);
  latent::RegionMask mask(1, 1, 1);
  latent::LatentGrid out =
      latent::compose_instance_to_group(group, {{a, mask}, {b, mask}}, 0.5, /*literal_sum=*/true);
  // both instances contribute their half on top of half the group twice over
  CHECK(out.at(0, 0, 0) > 15.0f);  // escapes the convex hull [1, 20]
}

TEST_CASE("composition validates shapes") {
  latent::LatentGrid group(4, 4, 2);
  latent::LatentGrid wrong(4, 5, 2);
  latent::RegionMask mask(4, 4, 1);
  CHECK_THROWS_AS(latent::compose_instance_to_group(group, {{wrong, mask}}, 0.8), InputError);
  latent::RegionMask wrong_mask(5, 4, 1);
  latent::LatentGrid inst(4, 4, 2);
  CHECK_THROWS_AS(latent::compose_instance_to_group(group, {{inst, wrong_mask}}, 0.8), InputError);
}

TEST_CASE("partial rgb injection blends inside the mask and is identity outside or at alpha 0") {
  std::mt19937_64 rng(5);
  latent::LatentGrid current = random_grid(rng, 8, 8, 4);
  latent::LatentGrid raw = random_grid(rng, 8, 8, 4);
  latent::RegionMask mask = random_mask(rng, 8, 8);

  latent::LatentGrid zero = latent::inject_partial_rgb(current, raw, mask, 0.0);
  CHECK(zero.data == current.data);

  latent::LatentGrid one = latent::inject_partial_rgb(current, raw, mask, 1.0);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x)
      for (int c = 0; c < 4; ++c)
        CHECK(one.at(x, y, c) == (mask.at(x, y) ? raw.at(x, y, c) : current.at(x, y, c)));

  latent::LatentGrid mid = latent::inject_partial_rgb(current, raw, mask, 0.8);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x)
      for (int c = 0; c < 4; ++c) {
        float cu = current.at(x, y, c), ra = raw.at(x, y, c), o = mid.at(x, y, c);
        if (!mask.at(x, y)) {
          CHECK(o == cu);
        } else {
          CHECK(o >= std::min(cu, ra) - 1e-6f);
          CHECK(o <= std::max(cu, ra) + 1e-6f);
        }
      }
}

TEST_CASE("mask downsampling is block max pooling") {
  ImageBuffer mask(8, 8, Semantic::Mask);
  mask.at(0, 0) = 1.0f;  // only one pixel in the top-left 4x4 block
  mask.at(7, 7) = 1.0f;  // and one in the bottom-right
  latent::RegionMask down = latent::downsample_mask_to_latent(mask, 2, 2);
  CHECK(down.at(0, 0) == 1);
  CHECK(down.at(1, 0) == 0);
  CHECK(down.at(0, 1) == 0);
  CHECK(down.at(1, 1) == 1);

  // image size must be an integer multiple of the latent size
  CHECK_THROWS_AS(latent::downsample_mask_to_latent(mask, 3, 3), InputError);
}

TEST_CASE("latent serialization round trips") {
  std::mt19937_64 rng(6);
  latent::LatentGrid grid = random_grid(rng, 12, 5, 4);
  grid.view_index = 3;
  grid.timestep = 17;
  fs::path path = fs::temp_directory_path() / "hug_latent_test.bin";
  latent::save_latent(grid, path.string());
  latent::LatentGrid back = latent::load_latent(path.string());
  fs::remove(path);
  CHECK(back.height == grid.height);
  CHECK(back.width == grid.width);
  CHECK(back.channels == grid.channels);
  CHECK(back.data == grid.data);

  CHECK_THROWS_AS(latent::load_latent("/nonexistent/latent.bin"), InputError);
}
