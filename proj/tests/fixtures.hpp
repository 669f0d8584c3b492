#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "ovp/mesh.hpp"
#include "ovp/scene_gen.hpp"

namespace fixture {

using ovp::Vec3;

inline const char* kUnitCubeObj =
    "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nv 0 0 1\nv 1 0 1\nv 1 1 1\nv 0 1 1\n"
    "f 1 3 2\nf 1 4 3\nf 5 6 7\nf 5 7 8\nf 1 2 6\nf 1 6 5\n"
    "f 2 3 7\nf 2 7 6\nf 3 4 8\nf 3 8 7\nf 4 1 5\nf 4 5 8\n";

// Two triangles covering [0, w] x [0, d] at z, facing +z.
inline ovp::TriMesh plane(double w, double d, double z = 0) {
  return ovp::TriMesh::from_raw({{0, 0, z}, {w, 0, z}, {w, d, z}, {0, d, z}}, {{{0, 1, 2}}, {{0, 2, 3}}});
}

// Closed axis-aligned box with outward winding.
inline ovp::TriMesh box(const Vec3& lo, const Vec3& hi) {
  std::vector<Vec3> v;
  for (int k = 0; k < 8; ++k) {
    v.emplace_back((k & 1) ? hi.x() : lo.x(), (k & 2) ? hi.y() : lo.y(), (k & 4) ? hi.z() : lo.z());
  }
  std::vector<ovp::Triangle> t = {{{0, 2, 3}}, {{0, 3, 1}}, {{4, 5, 7}}, {{4, 7, 6}}, {{0, 1, 5}}, {{0, 5, 4}},
                                  {{2, 6, 7}}, {{2, 7, 3}}, {{0, 4, 6}}, {{0, 6, 2}}, {{1, 3, 7}}, {{1, 7, 5}}};
  return ovp::TriMesh::from_raw(v, t);
}

inline ovp::SceneSpec one_building(double size = 10, double height = 35) {
  ovp::SceneSpec s;
  s.width = 100;
  s.depth = 100;
  s.buildings = {{"b0", {45, 45, 45 + size, 45 + size}, height}};
  return s;
}

inline ovp::SceneSpec two_buildings() {
  ovp::SceneSpec s;
  s.width = 120;
  s.depth = 100;
  s.buildings = {{"west", {20, 30, 50, 70}, 30}, {"east", {65, 25, 95, 60}, 45}};
  return s;
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("ovp_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace fixture
