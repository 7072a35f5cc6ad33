#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "hug/core/mesh.hpp"

namespace hug::fixture {

/// Body-part vocabulary of the capsule figures.
constexpr std::int32_t kPartHead = 1;
constexpr std::int32_t kPartTorso = 2;
constexpr std::int32_t kPartLeftArm = 3;
constexpr std::int32_t kPartRightArm = 4;
constexpr std::int32_t kPartLeftLeg = 5;
constexpr std::int32_t kPartRightLeg = 6;

/// Capsule between p0 and p1 (hemisphere caps), `segments` around the axis,
/// `rings` latitude bands per cap, all vertices labelled `part`. Faces wind
/// outward.
Mesh make_capsule(const Eigen::Vector3d& p0, const Eigen::Vector3d& p1, double radius, int segments, int rings,
                  std::int32_t part);

/// UV sphere, outward winding, all vertices labelled `part`.
Mesh make_uv_sphere(const Eigen::Vector3d& center, double radius, int stacks, int slices, int instance_id,
                    std::int32_t part = 1);

struct Figure {
  Mesh mesh;
  std::vector<Eigen::Vector3d> joints;  // pelvis, neck, head top, shoulders, hands, hips, feet
};

/// Six-capsule human stand-in (head/torso/arms/legs) with pelvis at
/// `pelvis`, about 1.8 units tall. reach = +1 extends the right arm along
/// +X toward a partner, reach = -1 the left arm along -X, 0 both hanging.
Figure make_figure(const Eigen::Vector3d& pelvis, int reach, int instance_id, int segments = 10, int rings = 3);

/// Distinct per-part base colors modulated smoothly by position.
void paint_by_part(Mesh& mesh);

struct TwoPersonFixture {
  Scene gt;                              // normalized to the canonical cube
  Scene init;                            // gt plus a smooth sinusoidal normal-direction field
  std::vector<Eigen::Vector3d> joints;   // both figures, normalized frame
  Eigen::Vector3d center = Eigen::Vector3d::Zero();  // world -> canonical normalization
  double scale = 2.0;
};

/// Two figures facing each other with their reaching hands `hand_gap` apart
/// (world units), normalized into the canonical cube; the initialization
/// perturbs every vertex along its normal by a sinusoid of amplitude
/// `perturbation` (normalized units). Deterministic under seed.
TwoPersonFixture make_two_person(double hand_gap = 0.03, double perturbation = 0.01, std::uint64_t seed = 11);

/// Two spheres of the given radius whose surfaces overlap by `penetration`
/// along the x axis (instance ids 1 and 2, part 1 everywhere).
Scene make_sphere_pair(double penetration = 0.02, double radius = 0.1, int stacks = 12, int slices = 16);

/// Writes the on-disk fixture the CLI pipeline consumes: rig.json, gt/ and
/// init/ meshes, joints.json, per-view optimization targets (group and solo
/// normals, ground-truth winner maps), calibrated rgb+depth views for
/// texture fusion and one perspective observation.
void write_fixture_tree(const std::filesystem::path& dir, const TwoPersonFixture& fixture, int resolution = 128);

}  // namespace hug::fixture
