#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "hug/core/errors.hpp"
#include "hug/core/image.hpp"
#include "hug/core/mesh.hpp"
#include "hug/core/pointcloud.hpp"
#include "hug/io/atomic_file.hpp"
#include "hug/io/image_io.hpp"
#include "hug/io/mesh_io.hpp"

using namespace hug;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("hug_io_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

Mesh sample_mesh(bool colors, bool parts) {
  Mesh mesh;
  mesh.instance_id = 1;
  mesh.vertices = {{0.125, -0.25, 0.5}, {1.0, 0.0625, -2.0}, {-0.75, 1.5, 0.375}, {0.0, 0.0, 1.0}};
  mesh.faces = {{0, 1, 2}, {0, 2, 3}};
  if (colors) mesh.vertex_colors = {{0, 0, 0}, {1, 1, 1}, {1, 0, 0}, {0.2, 0.4, 0.6}};
  if (parts) mesh.part_labels = {1, 2, 3, 2};
  return mesh;
}

ImageBuffer noise_image(int w, int h, Semantic sem, std::uint64_t seed) {
  ImageBuffer img(w, h, sem);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> unit(0.0f, 1.0f);
  for (auto& v : img.data) v = unit(rng);
  return img;
}

}  // namespace

TEST_CASE("PNG rgb round trip quantizes to 8 bits") {
  TempDir tmp;
  ImageBuffer img = noise_image(17, 9, Semantic::Rgb, 1);
  io::write_png(tmp.path / "a.png", img);
  ImageBuffer back = io::read_png(tmp.path / "a.png", Semantic::Rgb);
  REQUIRE(back.same_shape(img));
  for (std::size_t i = 0; i < img.data.size(); ++i) CHECK(std::abs(back.data[i] - img.data[i]) <= 0.5f / 255.0f);
}

TEST_CASE("PNG masks survive exactly") {
  TempDir tmp;
  ImageBuffer mask(13, 7, Semantic::Mask);
  for (std::size_t i = 0; i < mask.data.size(); i += 3) mask.data[i] = 1.0f;
  io::write_png(tmp.path / "m.png", mask);
  ImageBuffer back = io::read_png(tmp.path / "m.png", Semantic::Mask);
  CHECK(back.data == mask.data);
}

TEST_CASE("16-bit PNG id maps round trip exactly") {
  TempDir tmp;
  std::vector<std::int32_t> ids = {0, 1, 2, 3, 255, 256, 1000, 65535, 7, 0, 42, 9};
  io::write_png16(tmp.path / "ids.png", ids, 4, 3);
  int w = 0, h = 0;
  auto back = io::read_png16(tmp.path / "ids.png", w, h);
  CHECK(w == 4);
  CHECK(h == 3);
  CHECK(back == ids);
}

TEST_CASE("PFM round trip is bit exact for one and three channels") {
  TempDir tmp;
  for (Semantic sem : {Semantic::Depth, Semantic::Normal}) {
    ImageBuffer img = noise_image(11, 6, sem, 2);
    img.data[0] = -3.5f;  // PFM carries negatives (depth background sentinel)
    io::write_pfm(tmp.path / "x.pfm", img);
    ImageBuffer back = io::read_pfm(tmp.path / "x.pfm", sem);
    REQUIRE(back.same_shape(img));
    CHECK(back.data == img.data);
  }
}

TEST_CASE("corrupt image headers raise input errors") {
  TempDir tmp;
  std::ofstream(tmp.path / "bad.pfm") << "not a pfm";
  CHECK_THROWS_AS(io::read_pfm(tmp.path / "bad.pfm", Semantic::Depth), InputError);
  std::ofstream(tmp.path / "bad.png") << "not a png";
  CHECK_THROWS_AS(io::read_png(tmp.path / "bad.png", Semantic::Rgb), InputError);
  CHECK_THROWS_AS(io::read_png(tmp.path / "missing.png", Semantic::Rgb), InputError);
}

TEST_CASE("PLY round trip keeps positions to float precision and attributes exactly") {
  TempDir tmp;
  Mesh mesh = sample_mesh(true, true);
  io::write_ply(tmp.path / "m.ply", mesh);
  Mesh back = io::read_ply(tmp.path / "m.ply");

  REQUIRE(back.vertices.size() == mesh.vertices.size());
  REQUIRE(back.faces.size() == mesh.faces.size());
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    // positions are stored as float32
    for (int c = 0; c < 3; ++c)
      CHECK(back.vertices[v][c] == doctest::Approx(mesh.vertices[v][c]).epsilon(1e-6));
    for (int c = 0; c < 3; ++c)
      CHECK(std::abs(back.vertex_colors[v][c] - mesh.vertex_colors[v][c]) <= 0.5 / 255.0);
  }
  CHECK(back.part_labels == mesh.part_labels);
  CHECK(back.faces == mesh.faces);

  // attribute-free meshes stay attribute-free
  Mesh bare = sample_mesh(false, false);
  io::write_ply(tmp.path / "bare.ply", bare);
  Mesh bare_back = io::read_ply(tmp.path / "bare.ply");
  CHECK_FALSE(bare_back.has_colors());
  CHECK_FALSE(bare_back.has_parts());
}

TEST_CASE("OBJ round trip keeps vertices to printed precision") {
  TempDir tmp;
  Mesh mesh = sample_mesh(true, false);
  io::write_obj(tmp.path / "m.obj", mesh);
  Mesh back = io::read_obj(tmp.path / "m.obj");
  REQUIRE(back.vertices.size() == mesh.vertices.size());
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v)
    CHECK((back.vertices[v] - mesh.vertices[v]).norm() < 1e-7);
  CHECK(back.faces == mesh.faces);
  REQUIRE(back.has_colors());
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v)
    CHECK((back.vertex_colors[v] - mesh.vertex_colors[v]).norm() < 1e-7);
}

TEST_CASE("OBJ reader fan-triangulates polygons") {
  TempDir tmp;
  std::ofstream out(tmp.path / "quad.obj");
  out << "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n";
  out.close();
  Mesh mesh = io::read_obj(tmp.path / "quad.obj");
  REQUIRE(mesh.faces.size() == 2);
  CHECK(mesh.faces[0] == Eigen::Vector3i(0, 1, 2));
  CHECK(mesh.faces[1] == Eigen::Vector3i(0, 2, 3));
}

TEST_CASE("point cloud PLY round trip") {
  TempDir tmp;
  ColoredPointCloud cloud;
  cloud.points = {{0, 0, 0}, {0.5, -1.0, 2.0}, {3.25, 0.125, -0.5}};
  cloud.colors = {{1, 0, 0}, {0, 1, 0}, {0.2, 0.4, 0.8}};
  io::write_ply(tmp.path / "pc.ply", cloud);
  ColoredPointCloud back = io::read_ply_points(tmp.path / "pc.ply");
  REQUIRE(back.size() == cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    CHECK((back.points[i] - cloud.points[i]).norm() < 1e-6);
    for (int c = 0; c < 3; ++c) CHECK(std::abs(back.colors[i][c] - cloud.colors[i][c]) <= 0.5 / 255.0);
  }
}

TEST_CASE("mesh reads reject missing and malformed files") {
  TempDir tmp;
  CHECK_THROWS_AS(io::read_ply(tmp.path / "missing.ply"), InputError);
  std::ofstream(tmp.path / "bad.ply") << "ply\nformat ascii 2.0\n";
  CHECK_THROWS_AS(io::read_ply(tmp.path / "bad.ply"), InputError);
  CHECK_THROWS_AS(io::read_obj(tmp.path / "missing.obj"), InputError);
}

TEST_CASE("int32 grid round trip") {
  TempDir tmp;
  std::vector<std::int32_t> grid = {-1, 0, 1, 2, 100000, -37};
  io::write_int32_grid(tmp.path / "g.bin", grid, 3, 2);
  int w = 0, h = 0;
  auto back = io::read_int32_grid(tmp.path / "g.bin", w, h);
  CHECK(w == 3);
  CHECK(h == 2);
  CHECK(back == grid);
}

TEST_CASE("atomic writes land complete and leave no temporaries") {
  TempDir tmp;
  fs::path target = tmp.path / "nested" / "dir" / "file.txt";
  io::atomic_write_text(target, "payload");
  std::ifstream in(target);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(content == "payload");

  // the only file in the directory is the target: no temp residue
  int entries = 0;
  for (const auto& e : fs::directory_iterator(target.parent_path())) {
    (void)e;
    ++entries;
  }
  CHECK(entries == 1);

  // a writer that throws must not disturb the existing file
  CHECK_THROWS(io::atomic_write(target, [](const fs::path&) { throw InputError("boom"); }));
  std::ifstream in2(target);
  std::string content2((std::istreambuf_iterator<char>(in2)), std::istreambuf_iterator<char>());
  CHECK(content2 == "payload");
}

TEST_CASE("atomic write replaces existing content") {
  TempDir tmp;
  fs::path target = tmp.path / "file.txt";
  io::atomic_write_text(target, "old");
  io::atomic_write_text(target, "new");
  std::ifstream in(target);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(content == "new");
}
