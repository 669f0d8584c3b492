#include "ovp/mesh.hpp"

#include <cmath>
#include <map>
#include <unordered_map>

namespace ovp {

namespace {

struct CellKey {
  std::int64_t x, y, z;
  bool operator==(const CellKey&) const = default;
};

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const {
    std::uint64_t h = static_cast<std::uint64_t>(k.x) * 73856093ULL;
    h ^= static_cast<std::uint64_t>(k.y) * 19349663ULL;
    h ^= static_cast<std::uint64_t>(k.z) * 83492791ULL;
    return static_cast<std::size_t>(h);
  }
};

CellKey cell_of(const Vec3& p, double cell) {
  return {static_cast<std::int64_t>(std::floor(p.x() / cell)),
          static_cast<std::int64_t>(std::floor(p.y() / cell)),
          static_cast<std::int64_t>(std::floor(p.z() / cell))};
}

}  // namespace

TriMesh TriMesh::from_raw(std::vector<Vec3> vertices, std::vector<Triangle> triangles) {
  for (const auto& t : triangles) {
    for (auto idx : t) {
      if (idx >= vertices.size()) {
        throw ValidationError("triangle index " + std::to_string(idx) + " out of range (" +
                              std::to_string(vertices.size()) + " vertices)");
      }
    }
  }

  // Merge vertices closer than the tolerance; first occurrence wins.
  const double cell = 4.0 * kMergeTolerance;
  std::unordered_map<CellKey, std::vector<std::uint32_t>, CellKeyHash> grid;
  std::vector<std::uint32_t> remap(vertices.size());
  std::vector<Vec3> merged;
  merged.reserve(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Vec3& p = vertices[i];
    const CellKey k = cell_of(p, cell);
    std::int64_t found = -1;
    for (std::int64_t dx = -1; dx <= 1 && found < 0; ++dx) {
      for (std::int64_t dy = -1; dy <= 1 && found < 0; ++dy) {
        for (std::int64_t dz = -1; dz <= 1 && found < 0; ++dz) {
          auto it = grid.find({k.x + dx, k.y + dy, k.z + dz});
          if (it == grid.end()) continue;
          for (auto m : it->second) {
            if ((merged[m] - p).norm() <= kMergeTolerance) {
              found = m;
              break;
            }
          }
        }
      }
    }
    if (found < 0) {
      found = static_cast<std::int64_t>(merged.size());
      merged.push_back(p);
      grid[k].push_back(static_cast<std::uint32_t>(found));
    }
    remap[i] = static_cast<std::uint32_t>(found);
  }

  TriMesh mesh;
  mesh.vertices_ = std::move(merged);
  mesh.triangles_.reserve(triangles.size());
  mesh.normals_.reserve(triangles.size());
  for (const auto& t : triangles) {
    Triangle r{remap[t[0]], remap[t[1]], remap[t[2]]};
    if (r[0] == r[1] || r[1] == r[2] || r[0] == r[2]) continue;
    const Vec3& a = mesh.vertices_[r[0]];
    const Vec3 cr = (mesh.vertices_[r[1]] - a).cross(mesh.vertices_[r[2]] - a);
    const double area = 0.5 * cr.norm();
    if (!(area > kMinArea)) continue;
    mesh.triangles_.push_back(r);
    mesh.normals_.push_back(cr.normalized());
  }
  return mesh;
}

double TriMesh::triangle_area(std::size_t tri) const {
  const Vec3& a = corner(tri, 0);
  return 0.5 * (corner(tri, 1) - a).cross(corner(tri, 2) - a).norm();
}

double TriMesh::surface_area() const {
  double total = 0.0;
  for (std::size_t i = 0; i < triangles_.size(); ++i) total += triangle_area(i);
  return total;
}

Aabb TriMesh::bounds() const {
  Aabb box;
  for (const auto& t : triangles_) {
    for (auto idx : t) box.extend(vertices_[idx]);
  }
  return box;
}

bool TriMesh::is_parity_closed() const {
  if (triangles_.empty()) return false;
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> edge_use;
  for (const auto& t : triangles_) {
    for (int k = 0; k < 3; ++k) {
      auto a = t[k], b = t[(k + 1) % 3];
      if (a > b) std::swap(a, b);
      ++edge_use[{a, b}];
    }
  }
  const Aabb box = bounds();
  const double tol = 1e-9 * std::max(1.0, box.diagonal());
  auto on_rim = [&](const Vec3& p) {
    return std::abs(p.x() - box.min.x()) <= tol || std::abs(p.x() - box.max.x()) <= tol ||
           std::abs(p.y() - box.min.y()) <= tol || std::abs(p.y() - box.max.y()) <= tol;
  };
  for (const auto& [edge, count] : edge_use) {
    if (count == 2) continue;
    if (count != 1) return false;
    const Vec3& a = vertices_[edge.first];
    const Vec3& b = vertices_[edge.second];
    // A rim edge must run along one side of the rectangle.
    const bool same_side =
        (std::abs(a.x() - box.min.x()) <= tol && std::abs(b.x() - box.min.x()) <= tol) ||
        (std::abs(a.x() - box.max.x()) <= tol && std::abs(b.x() - box.max.x()) <= tol) ||
        (std::abs(a.y() - box.min.y()) <= tol && std::abs(b.y() - box.min.y()) <= tol) ||
        (std::abs(a.y() - box.max.y()) <= tol && std::abs(b.y() - box.max.y()) <= tol);
    if (!same_side || !on_rim(a) || !on_rim(b)) return false;
  }
  return true;
}

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  }
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

}  // namespace ovp
