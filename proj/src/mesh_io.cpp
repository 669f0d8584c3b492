#include "ovp/mesh_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ovp/format.hpp"

namespace ovp {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

TriMesh finish(std::vector<Vec3> vertices, std::vector<Triangle> triangles, const char* what) {
  TriMesh mesh = TriMesh::from_raw(std::move(vertices), std::move(triangles));
  if (mesh.empty()) throw ValidationError(std::string(what) + ": mesh is empty after cleaning");
  return mesh;
}

// ---- PLY ----------------------------------------------------------------

enum class PlyType { i8, u8, i16, u16, i32, u32, f32, f64 };

PlyType parse_ply_type(const std::string& name) {
  static const std::pair<const char*, PlyType> table[] = {
      {"char", PlyType::i8},    {"int8", PlyType::i8},     {"uchar", PlyType::u8},
      {"uint8", PlyType::u8},   {"short", PlyType::i16},   {"int16", PlyType::i16},
      {"ushort", PlyType::u16}, {"uint16", PlyType::u16},  {"int", PlyType::i32},
      {"int32", PlyType::i32},  {"uint", PlyType::u32},    {"uint32", PlyType::u32},
      {"float", PlyType::f32},  {"float32", PlyType::f32}, {"double", PlyType::f64},
      {"float64", PlyType::f64}};
  for (const auto& [n, t] : table) {
    if (name == n) return t;
  }
  throw ValidationError("ply: unknown property type '" + name + "'");
}

std::size_t ply_type_size(PlyType t) {
  switch (t) {
    case PlyType::i8:
    case PlyType::u8: return 1;
    case PlyType::i16:
    case PlyType::u16: return 2;
    case PlyType::i32:
    case PlyType::u32:
    case PlyType::f32: return 4;
    case PlyType::f64: return 8;
  }
  return 0;
}

struct PlyProperty {
  std::string name;
  PlyType type = PlyType::f32;
  bool is_list = false;
  PlyType count_type = PlyType::u8;
};

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<PlyProperty> props;
};

enum class PlyFormat { ascii, binary_le, binary_be };

class PlyReader {
 public:
  PlyReader(std::istream& in, PlyFormat fmt) : in_(in), fmt_(fmt) {}

  double read(PlyType t) {
    if (fmt_ == PlyFormat::ascii) {
      double v;
      if (!(in_ >> v)) throw ValidationError("ply: truncated ascii body");
      return v;
    }
    unsigned char buf[8];
    const std::size_t n = ply_type_size(t);
    if (!in_.read(reinterpret_cast<char*>(buf), static_cast<std::streamsize>(n))) {
      throw ValidationError("ply: truncated binary body");
    }
    const bool host_le = std::endian::native == std::endian::little;
    const bool file_le = fmt_ == PlyFormat::binary_le;
    if (host_le != file_le) std::reverse(buf, buf + n);
    switch (t) {
      case PlyType::i8: return static_cast<std::int8_t>(buf[0]);
      case PlyType::u8: return buf[0];
      case PlyType::i16: return load<std::int16_t>(buf);
      case PlyType::u16: return load<std::uint16_t>(buf);
      case PlyType::i32: return load<std::int32_t>(buf);
      case PlyType::u32: return load<std::uint32_t>(buf);
      case PlyType::f32: return load<float>(buf);
      case PlyType::f64: return load<double>(buf);
    }
    return 0.0;
  }

 private:
  template <typename T>
  static double load(const unsigned char* buf) {
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return static_cast<double>(v);
  }

  std::istream& in_;
  PlyFormat fmt_;
};

}  // namespace

TriMesh parse_ply(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("ply", 0) != 0) {
    throw ValidationError("ply: missing magic");
  }
  PlyFormat fmt = PlyFormat::ascii;
  std::vector<PlyElement> elements;
  bool have_format = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "format") {
      std::string f;
      ls >> f;
      if (f == "ascii") fmt = PlyFormat::ascii;
      else if (f == "binary_little_endian") fmt = PlyFormat::binary_le;
      else if (f == "binary_big_endian") fmt = PlyFormat::binary_be;
      else throw ValidationError("ply: unsupported format '" + f + "'");
      have_format = true;
    } else if (kw == "element") {
      PlyElement e;
      ls >> e.name >> e.count;
      elements.push_back(e);
    } else if (kw == "property") {
      if (elements.empty()) throw ValidationError("ply: property before element");
      PlyProperty p;
      std::string t;
      ls >> t;
      if (t == "list") {
        std::string ct, it;
        ls >> ct >> it >> p.name;
        p.is_list = true;
        p.count_type = parse_ply_type(ct);
        p.type = parse_ply_type(it);
      } else {
        p.type = parse_ply_type(t);
        ls >> p.name;
      }
      elements.back().props.push_back(p);
    } else if (kw == "end_header") {
      break;
    }
  }
  if (!have_format) throw ValidationError("ply: missing format line");

  PlyReader reader(in, fmt);
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
  for (const auto& e : elements) {
    const bool is_vertex = e.name == "vertex";
    const bool is_face = e.name == "face";
    int ix = -1, iy = -1, iz = -1, iface = -1;
    for (std::size_t k = 0; k < e.props.size(); ++k) {
      const auto& n = e.props[k].name;
      if (n == "x") ix = static_cast<int>(k);
      if (n == "y") iy = static_cast<int>(k);
      if (n == "z") iz = static_cast<int>(k);
      if (e.props[k].is_list && (n == "vertex_indices" || n == "vertex_index")) iface = static_cast<int>(k);
    }
    if (is_vertex && (ix < 0 || iy < 0 || iz < 0)) throw ValidationError("ply: vertex lacks x/y/z");
    for (std::size_t r = 0; r < e.count; ++r) {
      Vec3 p = Vec3::Zero();
      std::vector<std::uint32_t> poly;
      for (std::size_t k = 0; k < e.props.size(); ++k) {
        const auto& prop = e.props[k];
        if (prop.is_list) {
          const double cnt = reader.read(prop.count_type);
          if (cnt < 0) throw ValidationError("ply: negative list length");
          const auto m = static_cast<std::size_t>(cnt);
          for (std::size_t j = 0; j < m; ++j) {
            const double v = reader.read(prop.type);
            if (static_cast<int>(k) == iface) {
              if (v < 0) throw ValidationError("ply: negative vertex index");
              poly.push_back(static_cast<std::uint32_t>(v));
            }
          }
        } else {
          const double v = reader.read(prop.type);
          if (static_cast<int>(k) == ix) p.x() = v;
          if (static_cast<int>(k) == iy) p.y() = v;
          if (static_cast<int>(k) == iz) p.z() = v;
        }
      }
      if (is_vertex) vertices.push_back(p);
      if (is_face && poly.size() >= 3) {
        for (std::size_t j = 1; j + 1 < poly.size(); ++j) triangles.push_back({poly[0], poly[j], poly[j + 1]});
      }
    }
  }
  return finish(std::move(vertices), std::move(triangles), "ply");
}

TriMesh parse_obj(std::istream& in) {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "v") {
      Vec3 p;
      if (!(ls >> p.x() >> p.y() >> p.z())) {
        throw ValidationError("obj: malformed vertex on line " + std::to_string(lineno));
      }
      vertices.push_back(p);
    } else if (kw == "f") {
      std::vector<std::uint32_t> poly;
      std::string tok;
      while (ls >> tok) {
        const long idx = std::stol(tok.substr(0, tok.find('/')));
        long resolved = idx > 0 ? idx - 1 : static_cast<long>(vertices.size()) + idx;
        if (idx == 0 || resolved < 0) {
          throw ValidationError("obj: bad face index on line " + std::to_string(lineno));
        }
        poly.push_back(static_cast<std::uint32_t>(resolved));
      }
      for (std::size_t j = 1; j + 1 < poly.size(); ++j) triangles.push_back({poly[0], poly[j], poly[j + 1]});
    }
  }
  return finish(std::move(vertices), std::move(triangles), "obj");
}

TriMesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open mesh file '" + path.string() + "'");
  const std::string ext = lower(path.extension().string());
  if (ext == ".obj") return parse_obj(in);
  if (ext == ".ply") return parse_ply(in);
  char magic[3] = {};
  in.read(magic, 3);
  in.clear();
  in.seekg(0);
  if (std::string(magic, 3) == "ply") return parse_ply(in);
  throw ValidationError("unsupported mesh format '" + ext + "' for '" + path.string() + "'");
}

void save_obj(const TriMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  for (const auto& v : mesh.vertices()) {
    out << "v " << format_double(v.x()) << ' ' << format_double(v.y()) << ' ' << format_double(v.z())
        << '\n';
  }
  for (const auto& t : mesh.triangles()) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void save_ply(const TriMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "ply\nformat ascii 1.0\nelement vertex " << mesh.vertex_count()
      << "\nproperty double x\nproperty double y\nproperty double z\nelement face "
      << mesh.triangle_count() << "\nproperty list uchar int vertex_indices\nend_header\n";
  for (const auto& v : mesh.vertices()) {
    out << format_double(v.x()) << ' ' << format_double(v.y()) << ' ' << format_double(v.z()) << '\n';
  }
  for (const auto& t : mesh.triangles()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void save_point_cloud_ply(const std::filesystem::path& path, std::span<const Vec3> points,
                          std::span<const Vec3> normals, std::span<const Rgb> colors) {
  const bool with_normals = !normals.empty();
  const bool with_colors = !colors.empty();
  if ((with_normals && normals.size() != points.size()) || (with_colors && colors.size() != points.size())) {
    throw ValidationError("point cloud attribute count mismatch");
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "ply\nformat ascii 1.0\nelement vertex " << points.size()
      << "\nproperty double x\nproperty double y\nproperty double z\n";
  if (with_normals) out << "property double nx\nproperty double ny\nproperty double nz\n";
  if (with_colors) out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  out << "end_header\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    out << format_double(points[i].x()) << ' ' << format_double(points[i].y()) << ' '
        << format_double(points[i].z());
    if (with_normals) {
      out << ' ' << format_double(normals[i].x()) << ' ' << format_double(normals[i].y()) << ' '
          << format_double(normals[i].z());
    }
    if (with_colors) {
      out << ' ' << int(colors[i][0]) << ' ' << int(colors[i][1]) << ' ' << int(colors[i][2]);
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace ovp
