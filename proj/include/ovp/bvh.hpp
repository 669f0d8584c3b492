#pragma once

#include <optional>
#include <vector>

#include "ovp/mesh.hpp"

namespace ovp {

struct Ray {
  Vec3 origin = Vec3::Zero();
  Vec3 direction = Vec3::UnitZ();  // need not be unit; t is in direction units
};

struct RayHit {
  double t = 0;
  std::uint32_t triangle = 0;
};

// Moller-Trumbore, two-sided. Returns t in [t_min, t_max] when hit.
std::optional<double> intersect_triangle(const Ray& ray, const Vec3& a, const Vec3& b, const Vec3& c,
                                         double t_min, double t_max);

// Binary SAH bounding-volume hierarchy over a mesh. Holds a reference to
// the mesh, which must outlive it. Immutable once built; queries are
// thread-safe.
class Bvh {
 public:
  explicit Bvh(const TriMesh& mesh);

  // Closest hit with t in [t_min, t_max].
  std::optional<RayHit> first_hit(const Ray& ray, double t_min = 0.0,
                                  double t_max = std::numeric_limits<double>::infinity()) const;
  // True when any hit exists with t in [t_min, t_max].
  bool any_hit(const Ray& ray, double t_min, double t_max) const;

  const TriMesh& mesh() const { return *mesh_; }
  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    Aabb box;
    std::uint32_t first = 0;  // leaf: first primitive; inner: right child
    std::uint32_t count = 0;  // 0 for inner nodes
  };

  std::uint32_t build(std::uint32_t begin, std::uint32_t end, std::vector<Aabb>& boxes,
                      std::vector<Vec3>& centroids);
  template <bool AnyHit>
  std::optional<RayHit> traverse(const Ray& ray, double t_min, double t_max) const;

  const TriMesh* mesh_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> order_;
};

}  // namespace ovp
