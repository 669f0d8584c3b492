#pragma once

// Independent reference implementations used by the tests. They share no
// code with the library beyond plain data types, and favour obviousness
// over speed.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "ovp/mesh.hpp"
#include "ovp/recon.hpp"
#include "ovp/safe_zone.hpp"
#include "ovp/sampling.hpp"
#include "ovp/visibility.hpp"

namespace oracle {

using ovp::Vec3;

// Plane intersection followed by a same-side test against each edge.
inline std::optional<double> ray_triangle(const Vec3& o, const Vec3& d, const Vec3& a, const Vec3& b,
                                          const Vec3& c) {
  const Vec3 n = (b - a).cross(c - a);
  const double denom = n.dot(d);
  if (std::abs(denom) < 1e-14 * n.norm() * d.norm()) return std::nullopt;
  const double t = n.dot(a - o) / denom;
  const Vec3 p = o + t * d;
  const double tol = -1e-12 * n.squaredNorm();
  const double e0 = n.dot((b - a).cross(p - a));
  const double e1 = n.dot((c - b).cross(p - b));
  const double e2 = n.dot((a - c).cross(p - c));
  if (e0 < tol || e1 < tol || e2 < tol) return std::nullopt;
  return t;
}

struct Hit {
  double t;
  std::size_t tri;
};

inline std::optional<Hit> first_hit(const ovp::TriMesh& m, const Vec3& o, const Vec3& d, double tmin,
                                     double tmax) {
  std::optional<Hit> best;
  for (std::size_t i = 0; i < m.triangle_count(); ++i) {
    auto t = ray_triangle(o, d, m.corner(i, 0), m.corner(i, 1), m.corner(i, 2));
    if (t && *t >= tmin && *t <= tmax && (!best || *t < best->t)) best = Hit{*t, i};
  }
  return best;
}

inline double point_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

// Projection onto the plane when it falls inside, else nearest edge.
inline double point_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 n = (b - a).cross(c - a).normalized();
  const double h = n.dot(p - a);
  const Vec3 q = p - h * n;
  const bool inside = n.dot((b - a).cross(q - a)) >= 0 && n.dot((c - b).cross(q - b)) >= 0 &&
                      n.dot((a - c).cross(q - c)) >= 0;
  if (inside) return std::abs(h);
  return std::min({point_segment(p, a, b), point_segment(p, b, c), point_segment(p, c, a)});
}

inline double point_mesh(const ovp::TriMesh& m, const Vec3& p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m.triangle_count(); ++i) {
    best = std::min(best, point_triangle(p, m.corner(i, 0), m.corner(i, 1), m.corner(i, 2)));
  }
  return best;
}

// Odd number of triangle crossings along +z means inside.
inline bool inside_by_vertical_ray(const ovp::TriMesh& m, const Vec3& p) {
  int crossings = 0;
  for (std::size_t i = 0; i < m.triangle_count(); ++i) {
    auto t = ray_triangle(p, Vec3::UnitZ(), m.corner(i, 0), m.corner(i, 1), m.corner(i, 2));
    if (t && *t > 0) ++crossings;
  }
  return crossings % 2 == 1;
}

// atan2 form: well conditioned near 0 and pi, unlike acos of the dot.
inline double angle(const Vec3& a, const Vec3& b) { return std::atan2(a.cross(b).norm(), a.dot(b)); }

inline bool visible(const ovp::SurfaceSample& s, const ovp::ViewPoint& v, const ovp::CameraModel& cam,
                    const ovp::TriMesh& mesh) {
  const Vec3 to_s = s.position - v.position;
  const double dist = to_s.norm();
  if (dist > cam.max_range) return false;
  if (angle(v.direction, to_s) > cam.fov / 2) return false;
  if (angle(s.normal, -to_s) > cam.max_incidence) return false;
  auto hit = first_hit(mesh, v.position, to_s / dist, 0.0, dist - ovp::kOcclusionEpsilon);
  return !hit;
}

inline double logistic(double k, double x0, double x) { return 1.0 / (1.0 + std::exp(-k * (x - x0))); }

inline double q(const ovp::SurfaceSample& s, const Vec3& vi, const Vec3& vj, const ovp::ReconWeights& w) {
  const Vec3 a = vi - s.position, b = vj - s.position;
  const double alpha = angle(a, b);
  const double dm = std::max(a.norm(), b.norm());
  const double tm = std::max(angle(s.normal, a), angle(s.normal, b));
  const double w1 = logistic(w.k1, w.alpha1, alpha);
  const double w3 = 1.0 - logistic(w.k3, w.alpha3, alpha);
  const double w2 = std::max(0.0, 1.0 - dm / w.d_max);
  return w1 * w2 * w3 * std::max(std::cos(tm), 0.0);
}

// Explicit double loop over the view set.
template <class SeesFn>
double h(std::size_t si, const std::vector<std::uint32_t>& set, const std::vector<ovp::SurfaceSample>& samples,
         const std::vector<ovp::ViewPoint>& views, const ovp::ReconWeights& w, SeesFn sees) {
  double sum = 0;
  for (std::size_t a = 0; a < set.size(); ++a) {
    for (std::size_t b = a + 1; b < set.size(); ++b) {
      if (sees(si, set[a]) && sees(si, set[b])) {
        sum += q(samples[si], views[set[a]].position, views[set[b]].position, w);
      }
    }
  }
  return sum;
}

// Smallest subset size whose h exceeds t_h for every sample in `must`;
// returns -1 when none exists.
template <class HFn>
int min_feasible_subset(std::size_t n_views, const std::vector<std::size_t>& must, double t_h, HFn hfn) {
  int best = -1;
  for (std::uint32_t mask = 0; mask < (1u << n_views); ++mask) {
    const int size = __builtin_popcount(mask);
    if (best >= 0 && size >= best) continue;
    std::vector<std::uint32_t> set;
    for (std::uint32_t v = 0; v < n_views; ++v) {
      if (mask & (1u << v)) set.push_back(v);
    }
    bool ok = true;
    for (auto s : must) {
      if (!(hfn(s, set) > t_h)) {
        ok = false;
        break;
      }
    }
    if (ok) best = size;
  }
  return best;
}

// Optimal open path from `start` over all nodes by full enumeration.
template <class CostFn>
double exhaustive_open_path(std::size_t n, std::size_t start, CostFn cost) {
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < n; ++i) {
    if (i != start) rest.push_back(i);
  }
  double best = std::numeric_limits<double>::infinity();
  do {
    double c = 0;
    std::size_t prev = start;
    for (auto i : rest) {
      c += cost(prev, i);
      prev = i;
    }
    best = std::min(best, c);
  } while (std::next_permutation(rest.begin(), rest.end()));
  return n <= 1 ? 0.0 : best;
}

// Points along a polyline segment at most `step` apart that are not free.
inline std::size_t probe_violations(const ovp::SafeZone& zone, const Vec3& a, const Vec3& b, double step) {
  const double len = (b - a).norm();
  const auto n = static_cast<std::size_t>(std::ceil(len / step));
  std::size_t bad = 0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = n == 0 ? 0.0 : static_cast<double>(k) / static_cast<double>(n);
    if (!zone.is_free(a + t * (b - a))) ++bad;
  }
  return bad;
}

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec3 v;
  do v = Vec3(g(rng), g(rng), g(rng));
  while (v.norm() < 1e-9);
  return v.normalized();
}

}  // namespace oracle
