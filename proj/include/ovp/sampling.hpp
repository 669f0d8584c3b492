#pragma once

#include <vector>

#include "ovp/mesh.hpp"

namespace ovp {

struct CameraModel {
  double fov = 1.1;               // full field of view, radians
  double view_distance = 80.0;    // standoff distance for the target GSD, meters
  double max_range = 160.0;       // beyond this no observation counts, meters
  double max_incidence = 85.0 * kPi / 180.0;  // radians

  void validate() const;
};

struct SamplingParams {
  double overlap = 0.0;
  double footprint = 0.0;    // image footprint across the fov at view_distance
  double disk_radius = 0.0;  // Poisson-disk radius
};

// footprint = 2 * view_distance * tan(fov / 2); disk = footprint * (1 - overlap).
SamplingParams disk_radius(const CameraModel& camera, double overlap);

struct SurfaceSample {
  Vec3 position = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();
  std::uint32_t id = 0;
  std::uint32_t triangle = 0;
};

struct PoissonOptions {
  // Candidates per disk area (pi r^2 / 4); higher tightens maximality.
  double candidate_density = 40.0;
  // Optional bias of candidate placement toward creased triangles; 0 keeps
  // uniform area weighting.
  double curvature_weight = 0.0;
};

// Area-weighted dart throwing with spatial-hash rejection. Guarantees the
// minimum pairwise distance exactly and is deterministic for a seed.
std::vector<SurfaceSample> poisson_sample(const TriMesh& mesh, double radius, std::uint64_t seed,
                                          const PoissonOptions& options = {});

}  // namespace ovp
