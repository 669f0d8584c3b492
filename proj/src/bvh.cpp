#include "ovp/bvh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace ovp {

namespace {

constexpr std::uint32_t kLeafSize = 4;
constexpr int kBins = 12;

double half_area(const Aabb& b) {
  if (b.empty()) return 0.0;
  const Vec3 e = b.extent();
  return e.x() * e.y() + e.y() * e.z() + e.z() * e.x();
}

bool slab_test(const Aabb& box, const Vec3& origin, const Vec3& inv_dir, double t_min, double t_max) {
  for (int a = 0; a < 3; ++a) {
    double t0 = (box.min[a] - origin[a]) * inv_dir[a];
    double t1 = (box.max[a] - origin[a]) * inv_dir[a];
    if (inv_dir[a] < 0) std::swap(t0, t1);
    // NaN from 0 * inf (origin on a slab plane with a parallel ray) is
    // treated as inside the slab.
    if (!std::isnan(t0)) t_min = std::max(t_min, t0);
    if (!std::isnan(t1)) t_max = std::min(t_max, t1);
    if (t_min > t_max) return false;
  }
  return true;
}

}  // namespace

std::optional<double> intersect_triangle(const Ray& ray, const Vec3& a, const Vec3& b, const Vec3& c,
                                         double t_min, double t_max) {
  const Vec3 e1 = b - a, e2 = c - a;
  const Vec3 p = ray.direction.cross(e2);
  const double det = e1.dot(p);
  if (det == 0.0) return std::nullopt;
  const double inv = 1.0 / det;
  const Vec3 s = ray.origin - a;
  const double u = s.dot(p) * inv;
  if (u < 0.0 || u > 1.0) return std::nullopt;
  const Vec3 q = s.cross(e1);
  const double v = ray.direction.dot(q) * inv;
  if (v < 0.0 || u + v > 1.0) return std::nullopt;
  const double t = e2.dot(q) * inv;
  if (t < t_min || t > t_max) return std::nullopt;
  return t;
}

Bvh::Bvh(const TriMesh& mesh) : mesh_(&mesh) {
  if (mesh.empty()) throw ValidationError("cannot build a BVH over an empty mesh");
  const auto n = static_cast<std::uint32_t>(mesh.triangle_count());
  std::vector<Aabb> boxes(n);
  std::vector<Vec3> centroids(n);
  for (std::uint32_t t = 0; t < n; ++t) {
    for (int k = 0; k < 3; ++k) boxes[t].extend(mesh.corner(t, k));
    centroids[t] = boxes[t].center();
  }
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0u);
  nodes_.reserve(2 * n);
  build(0, n, boxes, centroids);
}

std::uint32_t Bvh::build(std::uint32_t begin, std::uint32_t end, std::vector<Aabb>& boxes,
                         std::vector<Vec3>& centroids) {
  const auto index = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back({});
  Aabb box, cbox;
  for (std::uint32_t i = begin; i < end; ++i) {
    box.extend(boxes[order_[i]]);
    cbox.extend(centroids[order_[i]]);
  }
  nodes_[index].box = box;
  const std::uint32_t count = end - begin;
  if (count <= kLeafSize) {
    nodes_[index].first = begin;
    nodes_[index].count = count;
    return index;
  }

  // Binned SAH over the widest centroid axis.
  int axis = 0;
  const Vec3 ce = cbox.extent();
  if (ce.y() > ce[axis]) axis = 1;
  if (ce.z() > ce[axis]) axis = 2;
  std::uint32_t mid = begin + count / 2;
  if (ce[axis] > 0) {
    std::array<Aabb, kBins> bin_box;
    std::array<std::uint32_t, kBins> bin_count{};
    const double scale = kBins / ce[axis];
    auto bin_of = [&](std::uint32_t t) {
      return std::min(kBins - 1, static_cast<int>((centroids[t][axis] - cbox.min[axis]) * scale));
    };
    for (std::uint32_t i = begin; i < end; ++i) {
      const int b = bin_of(order_[i]);
      bin_box[b].extend(boxes[order_[i]]);
      ++bin_count[b];
    }
    double best_cost = std::numeric_limits<double>::infinity();
    int best_split = -1;
    for (int s = 1; s < kBins; ++s) {
      Aabb left, right;
      std::uint32_t nl = 0, nr = 0;
      for (int b = 0; b < s; ++b) {
        left.extend(bin_box[b]);
        nl += bin_count[b];
      }
      for (int b = s; b < kBins; ++b) {
        right.extend(bin_box[b]);
        nr += bin_count[b];
      }
      if (nl == 0 || nr == 0) continue;
      const double cost = half_area(left) * nl + half_area(right) * nr;
      if (cost < best_cost) {
        best_cost = cost;
        best_split = s;
      }
    }
    if (best_split > 0) {
      auto it = std::partition(order_.begin() + begin, order_.begin() + end,
                               [&](std::uint32_t t) { return bin_of(t) < best_split; });
      mid = static_cast<std::uint32_t>(it - order_.begin());
    }
  }
  if (mid == begin || mid == end) {
    mid = begin + count / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::uint32_t x, std::uint32_t y) { return centroids[x][axis] < centroids[y][axis]; });
  }
  build(begin, mid, boxes, centroids);
  const std::uint32_t right = build(mid, end, boxes, centroids);
  nodes_[index].first = right;
  nodes_[index].count = 0;
  return index;
}

template <bool AnyHit>
std::optional<RayHit> Bvh::traverse(const Ray& ray, double t_min, double t_max) const {
  const Vec3 inv_dir = ray.direction.cwiseInverse();
  std::optional<RayHit> best;
  double t_best = t_max;
  std::uint32_t stack[128];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const std::uint32_t ni = stack[--top];
    const Node& node = nodes_[ni];
    if (!slab_test(node.box, ray.origin, inv_dir, t_min, t_best)) continue;
    if (node.count > 0) {
      for (std::uint32_t k = node.first; k < node.first + node.count; ++k) {
        const std::uint32_t t = order_[k];
        auto hit = intersect_triangle(ray, mesh_->corner(t, 0), mesh_->corner(t, 1), mesh_->corner(t, 2), t_min,
                                      t_best);
        if (!hit) continue;
        if (AnyHit) return RayHit{*hit, t};
        // Equal distances resolve to the lower triangle id.
        if (!best || *hit < t_best || (*hit == t_best && t < best->triangle)) {
          t_best = *hit;
          best = RayHit{*hit, t};
        }
      }
    } else {
      stack[top++] = node.first;
      stack[top++] = ni + 1;
    }
  }
  return best;
}

std::optional<RayHit> Bvh::first_hit(const Ray& ray, double t_min, double t_max) const {
  return traverse<false>(ray, t_min, t_max);
}

bool Bvh::any_hit(const Ray& ray, double t_min, double t_max) const {
  return traverse<true>(ray, t_min, t_max).has_value();
}

}  // namespace ovp
