#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Geometry>
#include <atomic>
#include <cmath>
#include <random>
#include <vector>

#include "hug/core/camera.hpp"
#include "hug/core/errors.hpp"
#include "hug/core/image.hpp"
#include "hug/core/mesh.hpp"
#include "hug/core/parallel.hpp"

using namespace hug;

namespace {

Camera make_ortho(int size = 64, double span = 3.0) {
  Camera cam;
  cam.mode = Camera::Mode::Orthographic;
  cam.width = size;
  cam.height = size;
  cam.scale = span / size;
  cam.cx = size / 2.0;
  cam.cy = size / 2.0;
  look_at(Eigen::Vector3d(0, 0, 3), Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitY(), cam.rotation,
          cam.translation);
  return cam;
}

Camera make_persp(int size = 64) {
  Camera cam;
  cam.mode = Camera::Mode::Perspective;
  cam.width = size;
  cam.height = size;
  cam.fx = cam.fy = 1.2 * size;
  cam.cx = size / 2.0;
  cam.cy = size / 2.0;
  look_at(Eigen::Vector3d(0.3, 0.2, 2.5), Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitY(), cam.rotation,
          cam.translation);
  return cam;
}

Mesh unit_tetra() {
  Mesh mesh;
  mesh.instance_id = 1;
  mesh.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  mesh.faces = {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}};
  return mesh;
}

}  // namespace

TEST_CASE("look_at produces a proper rotation that centers the target") {
  Eigen::Matrix3d r;
  Eigen::Vector3d t;
  Eigen::Vector3d eye(1.0, 2.0, 3.0), target(-0.5, 0.25, 0.0);
  look_at(eye, target, Eigen::Vector3d::UnitY(), r, t);

  CHECK((r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(r.determinant() == doctest::Approx(1.0));

  Camera cam;
  cam.mode = Camera::Mode::Orthographic;
  cam.scale = 0.01;
  cam.width = cam.height = 100;
  cam.cx = cam.cy = 50.0;
  cam.rotation = r;
  cam.translation = t;

  CHECK((cam.eye() - eye).norm() < 1e-12);
  CHECK((cam.gaze() - (target - eye).normalized()).norm() < 1e-12);

  // the target sits on the optical axis
  double u, v, d;
  REQUIRE(cam.project(target, u, v, d));
  CHECK(u == doctest::Approx(50.0));
  CHECK(v == doctest::Approx(50.0));
  CHECK(d == doctest::Approx((eye - target).norm()));
  CHECK(cam.depth_of(target) == doctest::Approx(d));
}

TEST_CASE("look_at rejects degenerate configurations") {
  Eigen::Matrix3d r;
  Eigen::Vector3d t;
  Eigen::Vector3d eye(0, 0, 1);
  CHECK_THROWS_AS(look_at(eye, eye, Eigen::Vector3d::UnitY(), r, t), InputError);
  CHECK_THROWS_AS(look_at(eye, Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitZ(), r, t), InputError);
}

TEST_CASE("orthographic project/unproject round trip") {
  Camera cam = make_ortho();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    Eigen::Vector3d p(coord(rng), coord(rng), coord(rng));
    double u, v, d;
    REQUIRE(cam.project(p, u, v, d));
    CHECK((cam.unproject(u, v, d) - p).norm() < 1e-12);
  }
}

TEST_CASE("perspective project/unproject round trip and behind-camera rejection") {
  Camera cam = make_persp();
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> coord(-0.8, 0.8);
  for (int i = 0; i < 200; ++i) {
    Eigen::Vector3d p(coord(rng), coord(rng), coord(rng));
    double u, v, d;
    REQUIRE(cam.project(p, u, v, d));
    CHECK(d > 0.0);
    CHECK((cam.unproject(u, v, d) - p).norm() < 1e-10);
  }
  // a point behind the eye cannot project
  Eigen::Vector3d behind = cam.eye() - 0.5 * cam.gaze();
  double u, v, d;
  CHECK_FALSE(cam.project(behind, u, v, d));
}

TEST_CASE("gaze_frame maps the gaze to +z and camera-facing normals to negative z") {
  for (const Camera& cam : {make_ortho(), make_persp()}) {
    Eigen::Matrix3d frame = cam.gaze_frame();
    CHECK((frame * cam.gaze() - Eigen::Vector3d(0, 0, 1)).norm() < 1e-12);
    Eigen::Vector3d toward_camera = -cam.gaze();
    CHECK((frame * toward_camera).z() == doctest::Approx(-1.0));
  }
}

TEST_CASE("camera validation catches bad intrinsics") {
  Camera cam = make_ortho();
  cam.validate();

  Camera bad = cam;
  bad.width = 0;
  CHECK_THROWS_AS(bad.validate(), InputError);

  bad = cam;
  bad.scale = 0.0;
  CHECK_THROWS_AS(bad.validate(), InputError);

  bad = make_persp();
  bad.fx = -1.0;
  CHECK_THROWS_AS(bad.validate(), InputError);

  bad = cam;
  bad.rotation(0, 0) = 2.0;  // not orthonormal
  CHECK_THROWS_AS(bad.validate(), InputError);

  bad = cam;
  bad.rotation.row(0) *= -1.0;  // reflection
  CHECK_THROWS_AS(bad.validate(), InputError);

  bad = cam;
  bad.translation.x() = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(bad.validate(), NumericalError);
}

TEST_CASE("mesh validation distinguishes input and numerical failures") {
  Mesh mesh = unit_tetra();
  mesh.validate();

  Mesh bad = mesh;
  bad.faces.push_back({0, 1, 4});
  CHECK_THROWS_AS(bad.validate(), InputError);

  bad = mesh;
  bad.faces.push_back({-1, 1, 2});
  CHECK_THROWS_AS(bad.validate(), InputError);

  bad = mesh;
  bad.vertices[0].x() = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(bad.validate(), NumericalError);

  bad = mesh;
  bad.vertex_colors.assign(2, Eigen::Vector3d::Zero());
  CHECK_THROWS_AS(bad.validate(), InputError);

  bad = mesh;
  bad.part_labels.assign(bad.vertices.size(), 0);  // labels start at 1
  CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("scene validation enforces unique positive instance ids") {
  Scene scene;
  scene.instances.push_back(unit_tetra());
  scene.instances.push_back(unit_tetra());
  scene.instances[1].instance_id = 2;
  scene.validate();
  CHECK(scene.total_vertices() == 8);
  CHECK(scene.total_faces() == 8);
  CHECK(scene.find_instance(2) == &scene.instances[1]);
  CHECK(scene.find_instance(7) == nullptr);

  scene.instances[1].instance_id = 1;
  CHECK_THROWS_AS(scene.validate(), InputError);
  scene.instances[1].instance_id = 0;
  CHECK_THROWS_AS(scene.validate(), InputError);
}

TEST_CASE("face normals follow the right-hand rule and flag degenerate faces") {
  Mesh mesh;
  mesh.instance_id = 1;
  mesh.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {2, 0, 0}};
  mesh.faces = {{0, 1, 2}, {0, 1, 3}};  // second face is collinear

  FaceNormals fn = compute_face_normals(mesh);
  CHECK((fn.normals[0] - Eigen::Vector3d::UnitZ()).norm() < 1e-12);
  CHECK(fn.degenerate[0] == 0);
  CHECK(fn.normals[1].norm() == 0.0);
  CHECK(fn.degenerate[1] == 1);
  CHECK(fn.any_degenerate);
}

TEST_CASE("vertex normals are area weighted and flag isolated vertices") {
  // two coplanar faces plus one vertex no face touches
  Mesh mesh;
  mesh.instance_id = 1;
  mesh.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {5, 5, 5}};
  mesh.faces = {{0, 1, 2}, {0, 2, 3}};

  VertexNormals vn = compute_vertex_normals(mesh);
  for (int v = 0; v < 4; ++v) CHECK((vn.normals[v] - Eigen::Vector3d::UnitZ()).norm() < 1e-12);
  CHECK(vn.isolated[4] == 1);
  CHECK(vn.normals[4].norm() == 0.0);
  CHECK(vn.any_isolated);

  // a skewed roof: the ridge normal is the normalized sum of the two
  // area-weighted face normals
  Mesh roof;
  roof.instance_id = 1;
  roof.vertices = {{0, 0, 0}, {1, 0, 0}, {0.5, 1, 0.5}, {0.5, -1, 0.5}};
  roof.faces = {{0, 1, 2}, {1, 0, 3}};
  FaceNormals fn = compute_face_normals(roof);
  Eigen::Vector3d a0 = (roof.vertices[1] - roof.vertices[0]).cross(roof.vertices[2] - roof.vertices[0]);
  Eigen::Vector3d a1 = (roof.vertices[0] - roof.vertices[1]).cross(roof.vertices[3] - roof.vertices[1]);
  Eigen::Vector3d expect = (0.5 * a0 + 0.5 * a1).normalized();
  VertexNormals rvn = compute_vertex_normals(roof);
  CHECK((rvn.normals[0] - expect).norm() < 1e-12);
  CHECK((rvn.normals[1] - expect).norm() < 1e-12);
}

TEST_CASE("bounding boxes expand and measure correctly") {
  Aabb box;
  CHECK(box.empty);
  box.expand(Eigen::Vector3d(1, 2, 3));
  box.expand(Eigen::Vector3d(-1, 0, 5));
  CHECK_FALSE(box.empty);
  CHECK((box.min - Eigen::Vector3d(-1, 0, 3)).norm() == 0.0);
  CHECK((box.max - Eigen::Vector3d(1, 2, 5)).norm() == 0.0);
  CHECK(box.volume() == doctest::Approx(2.0 * 2.0 * 2.0));
  CHECK((box.center() - Eigen::Vector3d(0, 1, 4)).norm() < 1e-15);

  Aabb other;
  other.expand(Eigen::Vector3d(10, 10, 10));
  box.expand(other);
  CHECK(box.max.x() == 10.0);

  Mesh mesh = unit_tetra();
  Aabb mb = bounding_box(mesh);
  CHECK((mb.min - Eigen::Vector3d::Zero()).norm() == 0.0);
  CHECK((mb.max - Eigen::Vector3d::Ones()).norm() == 0.0);

  Scene scene;
  scene.instances.push_back(mesh);
  Mesh shifted = unit_tetra();
  shifted.instance_id = 2;
  for (auto& v : shifted.vertices) v += Eigen::Vector3d(3, 0, 0);
  scene.instances.push_back(shifted);
  CHECK(bounding_box(scene).max.x() == 4.0);
}

TEST_CASE("face part labels use majority vote with ties to the smaller label") {
  Mesh mesh = unit_tetra();
  mesh.part_labels = {2, 2, 7, 7};
  CHECK(face_part_label(mesh, 0) == 2);  // vertices 0,2,1 -> labels 2,7,2
  CHECK(face_part_label(mesh, 3) == 7);  // vertices 1,2,3 -> labels 2,7,7
  // face 1: vertices 0,1,3 -> labels 2,2,7 majority 2
  CHECK(face_part_label(mesh, 1) == 2);
  // three distinct labels tie; the smallest wins
  mesh.part_labels = {5, 3, 9, 1};
  CHECK(face_part_label(mesh, 0) == 3);  // labels 5,9,3

  Mesh unlabeled = unit_tetra();
  CHECK(face_part_label(unlabeled, 0) == 0);
}

TEST_CASE("part vocabulary is distinct and ascending") {
  Scene scene;
  scene.instances.push_back(unit_tetra());
  scene.instances[0].part_labels = {4, 2, 4, 2};
  scene.instances.push_back(unit_tetra());
  scene.instances[1].instance_id = 2;
  scene.instances[1].part_labels = {2, 9, 9, 1};
  CHECK(part_vocabulary(scene) == std::vector<std::int32_t>{1, 2, 4, 9});
}

TEST_CASE("image buffers allocate by semantic and validate shape") {
  ImageBuffer rgb(4, 3, Semantic::Rgb);
  CHECK(rgb.channels == 3);
  CHECK(rgb.data.size() == 4 * 3 * 3);
  ImageBuffer depth(4, 3, Semantic::Depth, kDepthBackground);
  CHECK(depth.channels == 1);
  CHECK(depth.at(2, 1) == kDepthBackground);
  depth.at(2, 1) = 5.0f;
  CHECK(depth.data[1 * 4 + 2] == 5.0f);

  CHECK(ImageBuffer::channels_for(Semantic::Normal) == 3);
  CHECK(ImageBuffer::channels_for(Semantic::Mask) == 1);

  ImageBuffer bad = depth;
  bad.data.pop_back();
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = depth;
  bad.data[0] = std::numeric_limits<float>::quiet_NaN();
  CHECK_THROWS_AS(bad.validate(), NumericalError);
}

TEST_CASE("mask coverage counts nonzero first-channel pixels") {
  ImageBuffer mask(10, 10, Semantic::Mask);
  for (int x = 0; x < 5; ++x) mask.at(x, 0) = 1.0f;
  CHECK(mask_coverage(mask) == doctest::Approx(0.05));
}

TEST_CASE("parallel_chunks covers the range exactly once for any worker count") {
  const std::size_t n = 1003;
  for (int workers : {1, 2, 3, 7, 16}) {
    std::vector<std::atomic<int>> hits(n);
    parallel_chunks(0, n, workers, [&](std::size_t lo, std::size_t hi, int) {
      for (std::size_t i = lo; i < hi; ++i) hits[i].fetch_add(1);
    });
    for (std::size_t i = 0; i < n; ++i) CHECK(hits[i].load() == 1);
  }
  // empty ranges are a no-op
  bool called = false;
  parallel_chunks(5, 5, 4, [&](std::size_t, std::size_t, int) { called = true; });
  CHECK_FALSE(called);
}

TEST_CASE("thread count resolution prefers the explicit request") {
  CHECK(resolve_thread_count(3) == 3);
  CHECK(resolve_thread_count(0) >= 1);
}
