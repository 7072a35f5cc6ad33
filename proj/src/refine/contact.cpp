#include "hug/refine/contact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "hug/core/errors.hpp"
#include "hug/spatial/closest_point.hpp"
#include "hug/spatial/kdtree.hpp"

namespace hug::refine {

void PartPairSet::insert(PartPair pair) {
  if (std::make_pair(pair.instance_b, pair.part_b) < std::make_pair(pair.instance_a, pair.part_a)) {
    std::swap(pair.instance_a, pair.instance_b);
    std::swap(pair.part_a, pair.part_b);
  }
  auto it = std::lower_bound(pairs.begin(), pairs.end(), pair);
  if (it == pairs.end() || !(*it == pair)) pairs.insert(it, pair);
}

void PartPairSet::validate() const {
  for (const auto& p : pairs)
    if (p.instance_a == p.instance_b && p.part_a == p.part_b)
      throw InputError("PartPairSet: a part cannot pair with itself within one instance");
}

double penetration_temperature(double tol) { return std::max(0.25 * tol, 1e-5); }

namespace {

struct PartGeometry {
  std::vector<int> part_vertices;      // local ids labeled with this part
  std::vector<Eigen::Vector3i> faces;  // faces majority-labeled with this part, full-mesh indexing
};

struct InstanceGeometry {
  const Mesh* mesh = nullptr;
  std::size_t vertex_base = 0;  // global id offset
  spatial::SignedSurface surface;
  std::map<std::int32_t, PartGeometry> parts;
};

std::map<int, InstanceGeometry> build_geometry(const Scene& scene, const std::vector<std::size_t>* vertex_offsets) {
  std::map<int, InstanceGeometry> out;
  for (std::size_t mi = 0; mi < scene.instances.size(); ++mi) {
    const Mesh& mesh = scene.instances[mi];
    if (mesh.part_labels.empty()) throw InputError("contact pairs: instance lacks part labels");
    InstanceGeometry& geo = out[mesh.instance_id];
    geo.mesh = &mesh;
    geo.vertex_base = vertex_offsets ? (*vertex_offsets)[mi] : 0;
    geo.surface.build(mesh.vertices, mesh.faces);
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
      PartGeometry& part = geo.parts[mesh.part_labels[v]];
      part.part_vertices.push_back(static_cast<int>(v));
    }
    for (std::size_t f = 0; f < mesh.faces.size(); ++f)
      geo.parts[face_part_label(mesh, static_cast<int>(f))].faces.push_back(mesh.faces[f]);
  }
  return out;
}

/// Signed distance from the vertices of part `from` to the triangles of part
/// `to`, most negative kept; fills the witness with global vertex ids.
void scan_direction(const InstanceGeometry& from_geo, const PartGeometry& from,
                    const InstanceGeometry& to_geo, const PartGeometry& to, const spatial::TriangleBvh& to_bvh,
                    PairSeparation& best) {
  for (int v : from.part_vertices) {
    const Eigen::Vector3d& p = from_geo.mesh->vertices[v];
    spatial::TriangleBvh::Hit hit = to_bvh.closest(p);
    double rho = std::sqrt(hit.squared_distance);
    double sign = to_geo.surface.query(p).signed_distance < 0.0 ? -1.0 : 1.0;
    double d = sign * rho;
    if (!best.found || d < best.distance) {
      best.found = true;
      best.distance = d;
      const Eigen::Vector3i& tri = to.faces[hit.face];
      best.witness.vertex = static_cast<int>(from_geo.vertex_base) + v;
      for (int c = 0; c < 3; ++c) best.witness.tri[c] = static_cast<int>(to_geo.vertex_base) + tri[c];
      best.witness.bary = hit.bary;
      best.witness.sign = sign;
      best.witness.valid = true;
    }
  }
}

}  // namespace

PartPairSet contact_pairs_from_meshes(const Scene& scene, double contact_radius) {
  scene.validate();
  if (contact_radius <= 0.0) throw InputError("contact_pairs_from_meshes: radius must be positive");
  for (const auto& mesh : scene.instances)
    if (mesh.part_labels.empty()) throw InputError("contact_pairs_from_meshes: instance lacks part labels");

  // (instance, part) -> vertex positions
  struct Group {
    int instance;
    std::int32_t part;
    std::vector<Eigen::Vector3d> points;
  };
  std::vector<Group> groups;
  for (const auto& mesh : scene.instances) {
    std::map<std::int32_t, std::vector<Eigen::Vector3d>> by_part;
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) by_part[mesh.part_labels[v]].push_back(mesh.vertices[v]);
    for (auto& [part, pts] : by_part) groups.push_back({mesh.instance_id, part, std::move(pts)});
  }

  PartPairSet out;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    spatial::KdTree tree(groups[i].points);
    for (std::size_t j = i + 1; j < groups.size(); ++j) {
      if (groups[i].instance == groups[j].instance) continue;
      bool touching = false;
      for (const auto& p : groups[j].points)
        if (tree.any_within(p, contact_radius)) {
          touching = true;
          break;
        }
      if (touching)
        out.insert({groups[i].instance, groups[i].part, groups[j].instance, groups[j].part});
    }
  }
  return out;
}

std::vector<PairSeparation> pair_separations(const Scene& scene, const diff::SceneParam& param,
                                             const PartPairSet& pairs) {
  pairs.validate();
  std::vector<PairSeparation> out(pairs.pairs.size());
  if (pairs.empty()) return out;
  auto geometry = build_geometry(scene, &param.vertex_offset);

  // cache part BVHs across pairs that share a side
  std::map<std::pair<int, std::int32_t>, spatial::TriangleBvh> bvhs;
  auto part_bvh = [&](const InstanceGeometry& geo, int instance, std::int32_t part) -> const spatial::TriangleBvh& {
    auto key = std::make_pair(instance, part);
    auto it = bvhs.find(key);
    if (it == bvhs.end()) {
      const PartGeometry& pg = geo.parts.at(part);
      it = bvhs.emplace(key, spatial::TriangleBvh(geo.mesh->vertices, pg.faces)).first;
    }
    return it->second;
  };

  for (std::size_t k = 0; k < pairs.pairs.size(); ++k) {
    const PartPair& pair = pairs.pairs[k];
    auto ga = geometry.find(pair.instance_a);
    auto gb = geometry.find(pair.instance_b);
    if (ga == geometry.end() || gb == geometry.end())
      throw InputError("pair_separations: pair references an instance missing from the scene");
    auto pa = ga->second.parts.find(pair.part_a);
    auto pb = gb->second.parts.find(pair.part_b);
    if (pa == ga->second.parts.end() || pb == gb->second.parts.end()) continue;  // no geometry: stays found=false
    if (pa->second.faces.empty() || pb->second.faces.empty()) continue;
    scan_direction(ga->second, pa->second, gb->second, pb->second,
                   part_bvh(gb->second, pair.instance_b, pair.part_b), out[k]);
    scan_direction(gb->second, pb->second, ga->second, pa->second,
                   part_bvh(ga->second, pair.instance_a, pair.part_a), out[k]);
  }
  return out;
}

namespace {

void scan_witnesses(const InstanceGeometry& from_geo, const PartGeometry& from, const InstanceGeometry& to_geo,
                    const PartGeometry& to, const spatial::TriangleBvh& to_bvh, double band,
                    std::vector<diff::ContactWitness>& out) {
  for (int v : from.part_vertices) {
    const Eigen::Vector3d& p = from_geo.mesh->vertices[v];
    spatial::TriangleBvh::Hit hit = to_bvh.closest(p);
    double rho = std::sqrt(hit.squared_distance);
    double sign = to_geo.surface.query(p).signed_distance < 0.0 ? -1.0 : 1.0;
    if (sign * rho >= band) continue;
    diff::ContactWitness wit;
    const Eigen::Vector3i& tri = to.faces[hit.face];
    wit.vertex = static_cast<int>(from_geo.vertex_base) + v;
    for (int c = 0; c < 3; ++c) wit.tri[c] = static_cast<int>(to_geo.vertex_base) + tri[c];
    wit.bary = hit.bary;
    wit.sign = sign;
    wit.valid = true;
    out.push_back(wit);
  }
}

}  // namespace

std::vector<diff::ContactWitness> contact_witnesses(const Scene& scene, const diff::SceneParam& param,
                                                    const PartPairSet& pairs, double band) {
  pairs.validate();
  std::vector<diff::ContactWitness> out;
  if (pairs.empty()) return out;
  auto geometry = build_geometry(scene, &param.vertex_offset);

  std::map<std::pair<int, std::int32_t>, spatial::TriangleBvh> bvhs;
  auto part_bvh = [&](const InstanceGeometry& geo, int instance, std::int32_t part) -> const spatial::TriangleBvh& {
    auto key = std::make_pair(instance, part);
    auto it = bvhs.find(key);
    if (it == bvhs.end()) {
      const PartGeometry& pg = geo.parts.at(part);
      it = bvhs.emplace(key, spatial::TriangleBvh(geo.mesh->vertices, pg.faces)).first;
    }
    return it->second;
  };

  for (const PartPair& pair : pairs.pairs) {
    auto ga = geometry.find(pair.instance_a);
    auto gb = geometry.find(pair.instance_b);
    if (ga == geometry.end() || gb == geometry.end())
      throw InputError("contact_witnesses: pair references an instance missing from the scene");
    auto pa = ga->second.parts.find(pair.part_a);
    auto pb = gb->second.parts.find(pair.part_b);
    if (pa == ga->second.parts.end() || pb == gb->second.parts.end()) continue;
    if (pa->second.faces.empty() || pb->second.faces.empty()) continue;
    scan_witnesses(ga->second, pa->second, gb->second, pb->second,
                   part_bvh(gb->second, pair.instance_b, pair.part_b), band, out);
    scan_witnesses(gb->second, pb->second, ga->second, pa->second,
                   part_bvh(ga->second, pair.instance_a, pair.part_a), band, out);
  }
  return out;
}

double min_separation(const Scene& scene, const PartPairSet& pairs) {
  diff::SceneParam param = diff::SceneParam::from_scene(scene);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& sep : pair_separations(scene, param, pairs))
    if (sep.found) best = std::min(best, sep.distance);
  return best;
}

double interpenetration_loss(const Scene& scene, const PartPairSet& pairs, double tol, bool* empty_flag) {
  if (empty_flag) *empty_flag = pairs.empty();
  if (pairs.empty()) return 0.0;
  if (tol <= 0.0) throw InputError("interpenetration_loss: tol must be positive");
  diff::SceneParam param = diff::SceneParam::from_scene(scene);
  double temperature = penetration_temperature(tol);
  double sum = 0.0;
  for (const auto& sep : pair_separations(scene, param, pairs))
    if (sep.found) sum += diff::softplus_barrier(tol - sep.distance, temperature);
  return sum / static_cast<double>(pairs.pairs.size());
}

double fitting_interpenetration_loss(const Scene& scene, const PartPairSet& pairs, double tol, double gamma_pen) {
  if (gamma_pen < 0.0) throw InputError("fitting_interpenetration_loss: gamma_pen must be non-negative");
  if (gamma_pen == 0.0) return 0.0;
  return gamma_pen * interpenetration_loss(scene, pairs, tol);
}

}  // namespace hug::refine
