#include "ovp/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <unordered_map>

namespace ovp {

void CameraModel::validate() const {
  if (!(fov > 0 && fov < kPi)) throw ValidationError("camera fov must be in (0, pi)");
  if (!(view_distance > 0 && view_distance <= max_range)) {
    throw ValidationError("camera requires 0 < view_distance <= max_range");
  }
  if (!(max_incidence > 0 && max_incidence <= kPi / 2)) {
    throw ValidationError("camera max_incidence must be in (0, pi/2]");
  }
}

SamplingParams disk_radius(const CameraModel& camera, double overlap) {
  camera.validate();
  if (!(overlap >= 0 && overlap < 1)) throw ValidationError("overlap must lie in [0, 1)");
  SamplingParams p;
  p.overlap = overlap;
  p.footprint = 2.0 * camera.view_distance * std::tan(camera.fov / 2.0);
  p.disk_radius = p.footprint * (1.0 - overlap);
  return p;
}

namespace {

struct Key {
  std::int64_t x, y, z;
  bool operator==(const Key&) const = default;
};
struct KeyHash {
  std::size_t operator()(const Key& k) const {
    return static_cast<std::size_t>((static_cast<std::uint64_t>(k.x) * 73856093ULL) ^
                                    (static_cast<std::uint64_t>(k.y) * 19349663ULL) ^
                                    (static_cast<std::uint64_t>(k.z) * 83492791ULL));
  }
};

// Largest dihedral angle (0 = flat, pi = folded back) over each triangle's edges.
std::vector<double> crease_angles(const TriMesh& mesh) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::uint32_t>> edges;
  for (std::uint32_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles()[t];
    for (int k = 0; k < 3; ++k) {
      auto a = tri[k], b = tri[(k + 1) % 3];
      if (a > b) std::swap(a, b);
      edges[{a, b}].push_back(t);
    }
  }
  std::vector<double> crease(mesh.triangle_count(), 0.0);
  for (const auto& [edge, tris] : edges) {
    for (std::size_t i = 0; i < tris.size(); ++i) {
      for (std::size_t j = i + 1; j < tris.size(); ++j) {
        const double ang = angle_between(mesh.normals()[tris[i]], mesh.normals()[tris[j]]);
        crease[tris[i]] = std::max(crease[tris[i]], ang);
        crease[tris[j]] = std::max(crease[tris[j]], ang);
      }
    }
  }
  return crease;
}

}  // namespace

std::vector<SurfaceSample> poisson_sample(const TriMesh& mesh, double radius, std::uint64_t seed,
                                          const PoissonOptions& options) {
  if (!(radius > 0)) throw ValidationError("poisson radius must be positive");
  if (mesh.empty()) throw ValidationError("cannot sample an empty mesh");
  const double area = mesh.surface_area();
  if (!(area > 0)) throw ValidationError("cannot sample a zero-area mesh");
  if (radius > mesh.bounds().diagonal()) {
    log_warning("poisson radius exceeds the mesh diameter; at most one sample results");
  }

  std::vector<double> weights(mesh.triangle_count());
  std::vector<double> crease;
  if (options.curvature_weight > 0) crease = crease_angles(mesh);
  for (std::size_t t = 0; t < weights.size(); ++t) {
    weights[t] = mesh.triangle_area(t);
    if (!crease.empty()) weights[t] *= 1.0 + options.curvature_weight * crease[t] / kPi;
  }

  const double disk_area = kPi * radius * radius / 4.0;
  const double wanted = std::ceil(options.candidate_density * area / disk_area);
  const auto candidates = static_cast<std::size_t>(std::clamp(wanted, 64.0, 2.0e7));

  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::unordered_map<Key, std::vector<std::uint32_t>, KeyHash> grid;
  auto key_of = [&](const Vec3& p) {
    return Key{static_cast<std::int64_t>(std::floor(p.x() / radius)),
               static_cast<std::int64_t>(std::floor(p.y() / radius)),
               static_cast<std::int64_t>(std::floor(p.z() / radius))};
  };
  const double r2 = radius * radius;

  std::vector<SurfaceSample> samples;
  for (std::size_t c = 0; c < candidates; ++c) {
    const std::size_t t = pick(rng);
    double u = unit(rng), v = unit(rng);
    if (u + v > 1.0) {
      u = 1.0 - u;
      v = 1.0 - v;
    }
    const Vec3& a = mesh.corner(t, 0);
    const Vec3 p = a + u * (mesh.corner(t, 1) - a) + v * (mesh.corner(t, 2) - a);
    const Key k = key_of(p);
    bool ok = true;
    for (std::int64_t dx = -1; dx <= 1 && ok; ++dx) {
      for (std::int64_t dy = -1; dy <= 1 && ok; ++dy) {
        for (std::int64_t dz = -1; dz <= 1 && ok; ++dz) {
          auto it = grid.find({k.x + dx, k.y + dy, k.z + dz});
          if (it == grid.end()) continue;
          for (auto s : it->second) {
            if ((samples[s].position - p).squaredNorm() < r2) {
              ok = false;
              break;
            }
          }
        }
      }
    }
    if (!ok) continue;
    SurfaceSample s;
    s.position = p;
    s.normal = mesh.normals()[t];
    s.id = static_cast<std::uint32_t>(samples.size());
    s.triangle = static_cast<std::uint32_t>(t);
    grid[k].push_back(s.id);
    samples.push_back(s);
  }
  return samples;
}

}  // namespace ovp
