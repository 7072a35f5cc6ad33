#include "hug/core/mesh.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "hug/core/errors.hpp"

namespace hug {

namespace {
constexpr double kDegenerateAreaEps = 1e-16;  // squared-norm threshold on the area vector
}

void Mesh::validate() const {
  int n = static_cast<int>(vertices.size());
  for (const auto& v : vertices)
    if (!v.allFinite()) throw NumericalError("Mesh: non-finite vertex");
  for (const auto& f : faces)
    for (int c = 0; c < 3; ++c)
      if (f[c] < 0 || f[c] >= n) throw InputError("Mesh: face index out of range");
  if (!vertex_colors.empty()) {
    if (vertex_colors.size() != vertices.size()) throw InputError("Mesh: vertex_colors size mismatch");
    for (const auto& c : vertex_colors)
      if (!c.allFinite()) throw NumericalError("Mesh: non-finite vertex color");
  }
  if (!part_labels.empty()) {
    if (part_labels.size() != vertices.size()) throw InputError("Mesh: part_labels size mismatch");
    for (auto l : part_labels)
      if (l < 1) throw InputError("Mesh: part labels must be >= 1");
  }
}

std::size_t Scene::total_vertices() const {
  std::size_t n = 0;
  for (const auto& m : instances) n += m.vertices.size();
  return n;
}

std::size_t Scene::total_faces() const {
  std::size_t n = 0;
  for (const auto& m : instances) n += m.faces.size();
  return n;
}

void Scene::validate() const {
  std::set<int> ids;
  for (const auto& m : instances) {
    m.validate();
    if (m.instance_id < 1) throw InputError("Scene: instance ids must be >= 1");
    if (!ids.insert(m.instance_id).second)
      throw InputError("Scene: duplicate instance id " + std::to_string(m.instance_id));
  }
}

const Mesh* Scene::find_instance(int instance_id) const {
  for (const auto& m : instances)
    if (m.instance_id == instance_id) return &m;
  return nullptr;
}

FaceNormals compute_face_normals(const Mesh& mesh) {
  FaceNormals out;
  out.normals.resize(mesh.faces.size());
  out.degenerate.assign(mesh.faces.size(), 0);
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto& tri = mesh.faces[f];
    Eigen::Vector3d a = mesh.vertices[tri[1]] - mesh.vertices[tri[0]];
    Eigen::Vector3d b = mesh.vertices[tri[2]] - mesh.vertices[tri[0]];
    Eigen::Vector3d n = a.cross(b);
    double sq = n.squaredNorm();
    if (sq <= kDegenerateAreaEps) {
      out.normals[f].setZero();
      out.degenerate[f] = 1;
      out.any_degenerate = true;
    } else {
      out.normals[f] = n / std::sqrt(sq);
    }
  }
  return out;
}

VertexNormals compute_vertex_normals(const Mesh& mesh) {
  VertexNormals out;
  out.normals.assign(mesh.vertices.size(), Eigen::Vector3d::Zero());
  out.isolated.assign(mesh.vertices.size(), 0);
  for (const auto& tri : mesh.faces) {
    Eigen::Vector3d a = mesh.vertices[tri[1]] - mesh.vertices[tri[0]];
    Eigen::Vector3d b = mesh.vertices[tri[2]] - mesh.vertices[tri[0]];
    Eigen::Vector3d area = 0.5 * a.cross(b);  // face normal weighted by area
    for (int c = 0; c < 3; ++c) out.normals[tri[c]] += area;
  }
  for (std::size_t v = 0; v < out.normals.size(); ++v) {
    double sq = out.normals[v].squaredNorm();
    if (sq <= kDegenerateAreaEps) {
      out.normals[v].setZero();
      out.isolated[v] = 1;
      out.any_isolated = true;
    } else {
      out.normals[v] /= std::sqrt(sq);
    }
  }
  return out;
}

void Aabb::expand(const Eigen::Vector3d& p) {
  if (empty) {
    min = max = p;
    empty = false;
  } else {
    min = min.cwiseMin(p);
    max = max.cwiseMax(p);
  }
}

void Aabb::expand(const Aabb& other) {
  if (other.empty) return;
  expand(other.min);
  expand(other.max);
}

double Aabb::volume() const {
  if (empty) return 0.0;
  Eigen::Vector3d e = extent();
  return e.x() * e.y() * e.z();
}

Aabb bounding_box(const Mesh& mesh) {
  Aabb box;
  for (const auto& v : mesh.vertices) box.expand(v);
  return box;
}

Aabb bounding_box(const Scene& scene) {
  Aabb box;
  for (const auto& m : scene.instances) box.expand(bounding_box(m));
  return box;
}

std::int32_t face_part_label(const Mesh& mesh, int face) {
  if (!mesh.has_parts()) return 0;
  const auto& tri = mesh.faces[face];
  std::int32_t a = mesh.part_labels[tri[0]];
  std::int32_t b = mesh.part_labels[tri[1]];
  std::int32_t c = mesh.part_labels[tri[2]];
  if (a == b || a == c) return a;
  if (b == c) return b;
  return std::min({a, b, c});  // three-way tie: smallest label
}

std::vector<std::int32_t> part_vocabulary(const Scene& scene) {
  std::set<std::int32_t> labels;
  for (const auto& m : scene.instances)
    for (auto l : m.part_labels) labels.insert(l);
  return {labels.begin(), labels.end()};
}

}  // namespace hug
