#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace hug {

/// Triangle mesh. Vertices are metres in a right-handed world frame.
/// vertex_colors ([0,1] rgb) and part_labels (>= 1, indexing a body-part
/// vocabulary) are optional and either empty or sized like vertices.
struct Mesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<Eigen::Vector3i> faces;
  std::vector<Eigen::Vector3d> vertex_colors;
  std::vector<std::int32_t> part_labels;
  int instance_id = 0;

  bool has_colors() const { return !vertex_colors.empty(); }
  bool has_parts() const { return !part_labels.empty(); }

  /// Throws InputError on out-of-range face indices or mis-sized attribute
  /// arrays, NumericalError on non-finite vertices.
  void validate() const;
};

/// An ordered set of mesh instances sharing one world frame. Instance ids
/// must be unique and >= 1.
struct Scene {
  std::vector<Mesh> instances;

  std::size_t total_vertices() const;
  std::size_t total_faces() const;
  void validate() const;
  const Mesh* find_instance(int instance_id) const;
};

struct FaceNormals {
  std::vector<Eigen::Vector3d> normals;   // unit, zero for degenerate faces
  std::vector<std::uint8_t> degenerate;   // 1 where the face area vanished
  bool any_degenerate = false;
};

struct VertexNormals {
  std::vector<Eigen::Vector3d> normals;  // unit, zero for isolated vertices
  std::vector<std::uint8_t> isolated;    // 1 where no face (or only degenerate faces) touch
  bool any_isolated = false;
};

/// Right-hand-rule face normals: normalize((v1-v0) x (v2-v0)).
FaceNormals compute_face_normals(const Mesh& mesh);

/// Area-weighted vertex normals: normalize(sum of incident face area vectors).
VertexNormals compute_vertex_normals(const Mesh& mesh);

struct Aabb {
  Eigen::Vector3d min = Eigen::Vector3d::Zero();
  Eigen::Vector3d max = Eigen::Vector3d::Zero();
  bool empty = true;

  void expand(const Eigen::Vector3d& p);
  void expand(const Aabb& other);
  Eigen::Vector3d center() const { return 0.5 * (min + max); }
  Eigen::Vector3d extent() const { return max - min; }
  double volume() const;
};

Aabb bounding_box(const Mesh& mesh);
Aabb bounding_box(const Scene& scene);

/// Part label of a face by majority vote over its three vertices; ties pick
/// the smallest label. 0 when the mesh is unlabelled.
std::int32_t face_part_label(const Mesh& mesh, int face);

/// Distinct part labels present, ascending.
std::vector<std::int32_t> part_vocabulary(const Scene& scene);

}  // namespace hug
