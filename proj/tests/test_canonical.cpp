#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Geometry>
#include <cmath>
#include <filesystem>
#include <random>

#include "hug/canonical/occlusion_sim.hpp"
#include "hug/canonical/rig.hpp"
#include "hug/core/errors.hpp"
#include "hug/core/image.hpp"
#include "hug/core/mesh.hpp"
#include "oracles.hpp"

using namespace hug;
namespace fs = std::filesystem;

TEST_CASE("scene normalization centers the bounding box and fills the unit cube") {
  Scene scene;
  scene.instances.push_back(oracle::box_mesh({2.0, 1.0, -3.0}, {4.0, 5.0, -1.0}, 1));

  canonical::NormalizedScene norm = canonical::normalize_scene(scene, 0.05);
  Aabb box = bounding_box(norm.scene);
  CHECK((box.center() - Eigen::Vector3d::Zero()).norm() < 1e-12);
  // the largest extent (y: 4 units) grows by 5% and maps to [-1, 1]
  CHECK(box.max.y() == doctest::Approx(2.0 / 2.1));
  CHECK(box.max.cwiseAbs().maxCoeff() <= 1.0);
  CHECK(norm.scale == doctest::Approx(4.0 * 1.05));
  CHECK((norm.center - Eigen::Vector3d(3.0, 3.0, -2.0)).norm() < 1e-12);

  // round trip back to world coordinates
  Scene restored = canonical::denormalize_scene(norm.scene, norm.center, norm.scale);
  for (std::size_t v = 0; v < restored.instances[0].vertices.size(); ++v)
    CHECK((restored.instances[0].vertices[v] - scene.instances[0].vertices[v]).norm() < 1e-12);

  Eigen::Vector3d p(2.5, 1.25, -2.75);
  Eigen::Vector3d q = canonical::normalize_point(p, norm.center, norm.scale);
  CHECK((canonical::denormalize_point(q, norm.center, norm.scale) - p).norm() < 1e-12);
}

TEST_CASE("zero-extent scenes cannot be normalized") {
  Scene scene;
  Mesh point;
  point.instance_id = 1;
  point.vertices = {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}};
  point.faces = {{0, 1, 2}};
  scene.instances.push_back(point);
  CHECK_THROWS_AS(canonical::normalize_scene(scene), InputError);
}

TEST_CASE("the rig places six orthographic cameras on the azimuth circle") {
  canonical::CanonicalRig rig = canonical::build_rig(3.0, 256);
  for (int i = 0; i < canonical::CanonicalRig::kViews; ++i) {
    const Camera& cam = rig.cameras[i];
    cam.validate();
    CHECK(cam.mode == Camera::Mode::Orthographic);
    CHECK(cam.width == 256);
    CHECK(cam.height == 256);
    CHECK(cam.scale == doctest::Approx(3.0 / 256.0));

    double az = canonical::CanonicalRig::kAzimuths[i] * M_PI / 180.0;
    Eigen::Vector3d expect_eye(3.0 * std::sin(az), 0.0, 3.0 * std::cos(az));
    CHECK((cam.eye() - expect_eye).norm() < 1e-9);
    // every camera looks at the origin
    CHECK((cam.gaze() + expect_eye.normalized()).norm() < 1e-9);

    // the origin projects to the image centre at depth 3
    double u, v, d;
    REQUIRE(cam.project(Eigen::Vector3d::Zero(), u, v, d));
    CHECK(u == doctest::Approx(128.0));
    CHECK(v == doctest::Approx(128.0));
    CHECK(d == doctest::Approx(3.0));
  }

  CHECK(canonical::CanonicalRig::view_index(0.0) == 0);
  CHECK(canonical::CanonicalRig::view_index(315.0) == 5);
  CHECK_THROWS_AS(canonical::CanonicalRig::view_index(30.0), InputError);
}

TEST_CASE("rig JSON round trips through disk") {
  canonical::CanonicalRig rig = canonical::build_rig(2.5, 192);
  fs::path path = fs::temp_directory_path() / "hug_rig_test.json";
  canonical::save_rig(rig, path.string());
  canonical::CanonicalRig back = canonical::load_rig(path.string());
  fs::remove(path);

  CHECK(back.scale == rig.scale);
  CHECK((back.center - rig.center).norm() == 0.0);
  for (int i = 0; i < canonical::CanonicalRig::kViews; ++i) {
    CHECK(back.cameras[i].width == rig.cameras[i].width);
    CHECK(back.cameras[i].scale == doctest::Approx(rig.cameras[i].scale).epsilon(1e-15));
    CHECK((back.cameras[i].rotation - rig.cameras[i].rotation).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((back.cameras[i].translation - rig.cameras[i].translation).norm() < 1e-15);
  }

  CHECK_THROWS_AS(canonical::load_rig("/nonexistent/rig.json"), InputError);
  // malformed JSON propagates the parser's exception (mapped to exit 2 by the CLI)
  CHECK_THROWS(canonical::rig_from_json("{not json"));
}

TEST_CASE("single cameras round trip for both modes") {
  Camera persp;
  persp.mode = Camera::Mode::Perspective;
  persp.width = 640;
  persp.height = 480;
  persp.fx = 500.5;
  persp.fy = 499.25;
  persp.cx = 320.0;
  persp.cy = 240.0;
  look_at({0.1, 0.2, 2.0}, Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitY(), persp.rotation, persp.translation);

  Camera back = canonical::camera_from_json(canonical::camera_to_json(persp));
  CHECK(back.mode == Camera::Mode::Perspective);
  CHECK(back.fx == persp.fx);
  CHECK(back.fy == persp.fy);
  CHECK(back.cx == persp.cx);
  CHECK(back.cy == persp.cy);
  CHECK((back.rotation - persp.rotation).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((back.translation - persp.translation).norm() < 1e-15);

  Camera ortho = canonical::build_rig(3.0, 64).cameras[2];
  Camera oback = canonical::camera_from_json(canonical::camera_to_json(ortho));
  CHECK(oback.mode == Camera::Mode::Orthographic);
  CHECK(oback.scale == doctest::Approx(ortho.scale).epsilon(1e-15));
}

TEST_CASE("silhouette templates fill the documented area band") {
  auto templates = canonical::builtin_silhouette_templates();
  REQUIRE(!templates.empty());
  for (const auto& tmpl : templates) {
    CHECK(tmpl.width == canonical::kSilhouetteTemplateSize);
    CHECK(tmpl.height == canonical::kSilhouetteTemplateSize);
    tmpl.validate();
    double area = mask_coverage(tmpl);
    CHECK(area >= 0.33);
    CHECK(area <= 0.58);
  }
}

TEST_CASE("occlusion masks are deterministic under seed and land in the area band") {
  for (std::uint64_t seed : {1ull, 7ull, 42ull, 1234ull}) {
    ImageBuffer a = canonical::simulate_occlusion_mask(128, canonical::OcclusionKind::Silhouette, seed);
    ImageBuffer b = canonical::simulate_occlusion_mask(128, canonical::OcclusionKind::Silhouette, seed);
    CHECK(a.data == b.data);
    a.validate();
    double area = mask_coverage(a);
    CHECK(area >= 0.05);
    CHECK(area <= 0.60);
  }
  ImageBuffer x = canonical::simulate_occlusion_mask(128, canonical::OcclusionKind::Silhouette, 5);
  ImageBuffer y = canonical::simulate_occlusion_mask(128, canonical::OcclusionKind::Silhouette, 6);
  CHECK(x.data != y.data);

  ImageBuffer f = canonical::simulate_occlusion_mask(96, canonical::OcclusionKind::Freeform, 11);
  f.validate();
  CHECK(mask_coverage(f) > 0.0);
  ImageBuffer f2 = canonical::simulate_occlusion_mask(96, canonical::OcclusionKind::Freeform, 11);
  CHECK(f.data == f2.data);
}

TEST_CASE("explicit scale pins the silhouette size") {
  ImageBuffer small = canonical::simulate_occlusion_mask(128, canonical::OcclusionKind::Silhouette, 3, 0.4);
  ImageBuffer large = canonical::simulate_occlusion_mask(128, canonical::OcclusionKind::Silhouette, 3, 1.0);
  CHECK(mask_coverage(small) < mask_coverage(large));
}

TEST_CASE("dilate_mask grows area monotonically and validates the kernel") {
  ImageBuffer mask(64, 64, Semantic::Mask);
  for (int y = 28; y < 36; ++y)
    for (int x = 28; x < 36; ++x) mask.at(x, y) = 1.0f;
  double prev = mask_coverage(mask);
  for (int k : {3, 5, 9}) {
    ImageBuffer grown = canonical::dilate_mask(mask, k);
    double area = mask_coverage(grown);
    CHECK(area > prev);
    prev = area;
  }
  CHECK_THROWS_AS(canonical::dilate_mask(mask, 4), InputError);
}
