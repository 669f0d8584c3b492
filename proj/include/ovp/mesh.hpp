#pragma once

#include <array>
#include <vector>

#include "ovp/common.hpp"

namespace ovp {

using Triangle = std::array<std::uint32_t, 3>;

// Indexed triangle surface in a local metric ENU frame. Construct through
// TriMesh::from_raw, which cleans the input and derives unit normals.
class TriMesh {
 public:
  static constexpr double kMergeTolerance = 1e-6;
  static constexpr double kMinArea = 1e-9;

  TriMesh() = default;

  // Merges duplicate vertices within kMergeTolerance, drops triangles with
  // repeated indices or area <= kMinArea, and computes normals. Throws
  // ValidationError on out-of-range indices.
  static TriMesh from_raw(std::vector<Vec3> vertices, std::vector<Triangle> triangles);

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<Vec3>& normals() const { return normals_; }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t triangle_count() const { return triangles_.size(); }
  bool empty() const { return triangles_.empty(); }

  const Vec3& corner(std::size_t tri, int k) const { return vertices_[triangles_[tri][k]]; }
  double triangle_area(std::size_t tri) const;
  double surface_area() const;
  Aabb bounds() const;

  // True when vertical-ray parity is well defined: every edge is shared by
  // exactly two triangles, or the only boundary edges lie on the outer rim
  // of the xy bounding rectangle (a terrain sheet closing downward).
  bool is_parity_closed() const;

 private:
  std::vector<Vec3> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Vec3> normals_;
};

// Closest point on triangle (a, b, c) to p.
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace ovp
