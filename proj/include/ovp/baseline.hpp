#pragma once

#include <vector>

#include "ovp/sampling.hpp"
#include "ovp/visibility.hpp"

namespace ovp {

// Penta-view oblique survey: one nadir camera and four cameras tilted from
// nadir toward +x, -x, +y, -y, flown on a serpentine grid at fixed height.
struct ObliqueConfig {
  double height = 100.0;  // above the ground plane (bounds.min.z)
  double forward_overlap = 0.85;
  double side_overlap = 0.85;
  double tilt = 45.0 * kPi / 180.0;
  CameraModel camera;
};

struct ObliqueGrid {
  double footprint = 0;   // nadir ground footprint
  double forward_spacing = 0;
  double side_spacing = 0;
  std::size_t stations_x = 0;  // along track
  std::size_t stations_y = 0;  // across track (flight lines)
};

// Throws ValidationError for non-positive spacing or a height that does not
// clear the scene.
ObliqueGrid oblique_grid(const Aabb& bounds, const ObliqueConfig& cfg);

// Viewpoints in flight order: stations serpentine line by line, five
// cameras per station (nadir, +x, -x, +y, -y). All get state kept.
std::vector<ViewPoint> plan_oblique(const Aabb& bounds, const ObliqueConfig& cfg);

}  // namespace ovp
