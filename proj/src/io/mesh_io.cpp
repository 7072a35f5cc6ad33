#include "hug/io/mesh_io.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hug/core/errors.hpp"

namespace hug::io {

namespace {

std::uint8_t color_byte(double v) {
  double c = std::clamp(v, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::lround(c * 255.0));
}

void append_fmt(std::string& out, const char* fmt, double a, double b, double c) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c);
  out += buf;
}

}  // namespace

void write_obj(const std::filesystem::path& path, const Mesh& mesh) {
  mesh.validate();
  std::string text;
  text.reserve(mesh.vertices.size() * 40 + mesh.faces.size() * 20);
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const auto& v = mesh.vertices[i];
    append_fmt(text, "v %.9g %.9g %.9g", v.x(), v.y(), v.z());
    if (mesh.has_colors()) {
      const auto& c = mesh.vertex_colors[i];
      append_fmt(text, " %.9g %.9g %.9g", c.x(), c.y(), c.z());
    }
    text += '\n';
  }
  for (const auto& f : mesh.faces) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "f %d %d %d\n", f[0] + 1, f[1] + 1, f[2] + 1);
    text += buf;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open " + path.string());
  out << text;
  if (!out) throw InputError("write failed: " + path.string());
}

Mesh read_obj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  Mesh mesh;
  bool any_color = false;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "v") {
      double x, y, z;
      if (!(ss >> x >> y >> z)) throw InputError("malformed OBJ vertex: " + line);
      mesh.vertices.emplace_back(x, y, z);
      double r, g, b;
      if (ss >> r >> g >> b) {
        mesh.vertex_colors.resize(mesh.vertices.size(), Eigen::Vector3d::Zero());
        mesh.vertex_colors.back() = {r, g, b};
        any_color = true;
      } else if (any_color) {
        throw InputError("OBJ mixes colored and uncolored vertices: " + path.string());
      }
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ss >> tok) {
        // "i", "i/t", "i/t/n", "i//n" all start with the vertex index
        int v = std::stoi(tok.substr(0, tok.find('/')));
        if (v < 0) v = static_cast<int>(mesh.vertices.size()) + v + 1;
        idx.push_back(v - 1);
      }
      if (idx.size() < 3) throw InputError("OBJ face with fewer than 3 vertices: " + line);
      for (std::size_t k = 2; k < idx.size(); ++k)
        mesh.faces.emplace_back(idx[0], idx[k - 1], idx[k]);
    }
  }
  if (any_color && mesh.vertex_colors.size() != mesh.vertices.size())
    mesh.vertex_colors.resize(mesh.vertices.size(), Eigen::Vector3d::Zero());
  mesh.validate();
  return mesh;
}

namespace {

enum class PlyType { Char, Uchar, Short, Ushort, Int, Uint, Float, Double };

int ply_type_size(PlyType t) {
  switch (t) {
    case PlyType::Char:
    case PlyType::Uchar:
      return 1;
    case PlyType::Short:
    case PlyType::Ushort:
      return 2;
    case PlyType::Int:
    case PlyType::Uint:
    case PlyType::Float:
      return 4;
    case PlyType::Double:
      return 8;
  }
  return 0;
}

PlyType parse_ply_type(const std::string& s) {
  if (s == "char" || s == "int8") return PlyType::Char;
  if (s == "uchar" || s == "uint8") return PlyType::Uchar;
  if (s == "short" || s == "int16") return PlyType::Short;
  if (s == "ushort" || s == "uint16") return PlyType::Ushort;
  if (s == "int" || s == "int32") return PlyType::Int;
  if (s == "uint" || s == "uint32") return PlyType::Uint;
  if (s == "float" || s == "float32") return PlyType::Float;
  if (s == "double" || s == "float64") return PlyType::Double;
  throw InputError("unknown PLY property type: " + s);
}

double read_ply_scalar(std::istream& in, PlyType t) {
  // binary little-endian payload; host is little-endian
  switch (t) {
    case PlyType::Char: {
      std::int8_t v;
      in.read(reinterpret_cast<char*>(&v), 1);
      return v;
    }
    case PlyType::Uchar: {
      std::uint8_t v;
      in.read(reinterpret_cast<char*>(&v), 1);
      return v;
    }
    case PlyType::Short: {
      std::int16_t v;
      in.read(reinterpret_cast<char*>(&v), 2);
      return v;
    }
    case PlyType::Ushort: {
      std::uint16_t v;
      in.read(reinterpret_cast<char*>(&v), 2);
      return v;
    }
    case PlyType::Int: {
      std::int32_t v;
      in.read(reinterpret_cast<char*>(&v), 4);
      return v;
    }
    case PlyType::Uint: {
      std::uint32_t v;
      in.read(reinterpret_cast<char*>(&v), 4);
      return v;
    }
    case PlyType::Float: {
      float v;
      in.read(reinterpret_cast<char*>(&v), 4);
      return v;
    }
    case PlyType::Double: {
      double v;
      in.read(reinterpret_cast<char*>(&v), 8);
      return v;
    }
  }
  return 0.0;
}

struct PlyProperty {
  std::string name;
  PlyType type = PlyType::Float;
  bool is_list = false;
  PlyType count_type = PlyType::Uchar;
};

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<PlyProperty> properties;
};

std::vector<PlyElement> parse_ply_header(std::istream& in, const std::filesystem::path& path) {
  std::string line;
  if (!std::getline(in, line) || (line != "ply" && line != "ply\r"))
    throw InputError("not a PLY file: " + path.string());
  std::vector<PlyElement> elements;
  bool format_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "comment" || tag.empty()) continue;
    if (tag == "format") {
      std::string fmt;
      ss >> fmt;
      if (fmt != "binary_little_endian")
        throw InputError("only binary little-endian PLY is supported: " + path.string());
      format_seen = true;
    } else if (tag == "element") {
      PlyElement el;
      ss >> el.name >> el.count;
      elements.push_back(el);
    } else if (tag == "property") {
      if (elements.empty()) throw InputError("PLY property before element: " + path.string());
      PlyProperty prop;
      std::string t;
      ss >> t;
      if (t == "list") {
        std::string ct, vt;
        ss >> ct >> vt >> prop.name;
        prop.is_list = true;
        prop.count_type = parse_ply_type(ct);
        prop.type = parse_ply_type(vt);
      } else {
        prop.type = parse_ply_type(t);
        ss >> prop.name;
      }
      elements.back().properties.push_back(prop);
    } else if (tag == "end_header") {
      if (!format_seen) throw InputError("PLY header missing format line: " + path.string());
      return elements;
    } else {
      throw InputError("unknown PLY header line: " + line);
    }
  }
  throw InputError("PLY header not terminated: " + path.string());
}

struct PlyContents {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<Eigen::Vector3d> colors;
  std::vector<std::int32_t> part_labels;
  std::vector<Eigen::Vector3i> faces;
  bool has_colors = false;
  bool has_parts = false;
};

PlyContents read_ply_contents(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  auto elements = parse_ply_header(in, path);
  PlyContents out;
  for (const auto& el : elements) {
    if (el.name == "vertex") {
      out.vertices.resize(el.count);
      for (const auto& p : el.properties) {
        if (p.is_list) throw InputError("list-typed vertex property unsupported: " + path.string());
        if (p.name == "red" || p.name == "green" || p.name == "blue") out.has_colors = true;
        if (p.name == "part_label") out.has_parts = true;
      }
      if (out.has_colors) out.colors.assign(el.count, Eigen::Vector3d::Zero());
      if (out.has_parts) out.part_labels.assign(el.count, 1);
      for (std::size_t i = 0; i < el.count; ++i) {
        for (const auto& p : el.properties) {
          double v = read_ply_scalar(in, p.type);
          if (p.name == "x") out.vertices[i].x() = v;
          else if (p.name == "y") out.vertices[i].y() = v;
          else if (p.name == "z") out.vertices[i].z() = v;
          else if (p.name == "red") out.colors[i].x() = v / 255.0;
          else if (p.name == "green") out.colors[i].y() = v / 255.0;
          else if (p.name == "blue") out.colors[i].z() = v / 255.0;
          else if (p.name == "part_label") out.part_labels[i] = static_cast<std::int32_t>(v);
          // anything else is read for its bytes and dropped
        }
      }
    } else if (el.name == "face") {
      out.faces.reserve(el.count);
      for (std::size_t i = 0; i < el.count; ++i) {
        for (const auto& p : el.properties) {
          if (!p.is_list) {
            read_ply_scalar(in, p.type);
            continue;
          }
          int n = static_cast<int>(read_ply_scalar(in, p.count_type));
          std::vector<int> idx(n);
          for (int k = 0; k < n; ++k) idx[k] = static_cast<int>(read_ply_scalar(in, p.type));
          if (p.name == "vertex_indices" || p.name == "vertex_index") {
            if (n < 3) throw InputError("PLY face with fewer than 3 vertices: " + path.string());
            for (int k = 2; k < n; ++k) out.faces.emplace_back(idx[0], idx[k - 1], idx[k]);
          }
        }
      }
    } else {
      // skip unknown fixed-size elements
      for (std::size_t i = 0; i < el.count; ++i)
        for (const auto& p : el.properties) {
          if (p.is_list) {
            int n = static_cast<int>(read_ply_scalar(in, p.count_type));
            for (int k = 0; k < n; ++k) read_ply_scalar(in, p.type);
          } else {
            read_ply_scalar(in, p.type);
          }
        }
    }
    if (!in) throw InputError("truncated PLY payload: " + path.string());
  }
  return out;
}

template <typename T>
void put(std::string& buf, T v) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  buf.append(bytes, sizeof(T));
}

}  // namespace

void write_ply(const std::filesystem::path& path, const Mesh& mesh) {
  mesh.validate();
  std::ostringstream header;
  header << "ply\nformat binary_little_endian 1.0\n";
  header << "element vertex " << mesh.vertices.size() << "\n";
  header << "property float x\nproperty float y\nproperty float z\n";
  if (mesh.has_colors()) header << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  if (mesh.has_parts()) header << "property int part_label\n";
  header << "element face " << mesh.faces.size() << "\n";
  header << "property list uchar int vertex_indices\n";
  header << "end_header\n";

  std::string body;
  body.reserve(mesh.vertices.size() * 16 + mesh.faces.size() * 13);
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const auto& v = mesh.vertices[i];
    put(body, static_cast<float>(v.x()));
    put(body, static_cast<float>(v.y()));
    put(body, static_cast<float>(v.z()));
    if (mesh.has_colors()) {
      const auto& c = mesh.vertex_colors[i];
      put(body, color_byte(c.x()));
      put(body, color_byte(c.y()));
      put(body, color_byte(c.z()));
    }
    if (mesh.has_parts()) put(body, mesh.part_labels[i]);
  }
  for (const auto& f : mesh.faces) {
    put(body, static_cast<std::uint8_t>(3));
    put(body, f[0]);
    put(body, f[1]);
    put(body, f[2]);
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open " + path.string());
  out << header.str() << body;
  if (!out) throw InputError("write failed: " + path.string());
}

Mesh read_ply(const std::filesystem::path& path) {
  PlyContents c = read_ply_contents(path);
  Mesh mesh;
  mesh.vertices = std::move(c.vertices);
  mesh.faces = std::move(c.faces);
  if (c.has_colors) mesh.vertex_colors = std::move(c.colors);
  if (c.has_parts) mesh.part_labels = std::move(c.part_labels);
  mesh.validate();
  return mesh;
}

void write_ply(const std::filesystem::path& path, const ColoredPointCloud& cloud) {
  cloud.validate();
  Mesh as_mesh;
  as_mesh.vertices = cloud.points;
  as_mesh.vertex_colors = cloud.colors;
  write_ply(path, as_mesh);
}

ColoredPointCloud read_ply_points(const std::filesystem::path& path) {
  PlyContents c = read_ply_contents(path);
  ColoredPointCloud cloud;
  cloud.points = std::move(c.vertices);
  cloud.colors = c.has_colors ? std::move(c.colors) : std::vector<Eigen::Vector3d>(cloud.points.size(), Eigen::Vector3d::Zero());
  cloud.validate();
  return cloud;
}

}  // namespace hug::io
