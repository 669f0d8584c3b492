#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "ovp/mesh.hpp"

namespace ovp {

// Loads an OBJ (v/f records; polygons fan-triangulated, negative indices
// allowed) or a PLY (ascii, binary_little_endian, binary_big_endian) mesh.
// The format is taken from the extension, falling back to the header.
// Throws IoError when unreadable and ValidationError when the content is
// unsupported or the cleaned mesh is empty.
TriMesh load_mesh(const std::filesystem::path& path);

TriMesh parse_obj(std::istream& in);
TriMesh parse_ply(std::istream& in);

void save_obj(const TriMesh& mesh, const std::filesystem::path& path);
void save_ply(const TriMesh& mesh, const std::filesystem::path& path);


// ASCII PLY point cloud; normals and colors are optional per-point columns.
void save_point_cloud_ply(const std::filesystem::path& path, std::span<const Vec3> points,
                          std::span<const Vec3> normals = {}, std::span<const Rgb> colors = {});

}  // namespace ovp
