#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ovp/mesh.hpp"

namespace ovp {

struct Footprint {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  double width() const { return x1 - x0; }
  double depth() const { return y1 - y0; }
  // Closed rectangles: touching counts as overlapping.
  bool intersects(const Footprint& o) const {
    return x0 <= o.x1 && o.x0 <= x1 && y0 <= o.y1 && o.y0 <= y1;
  }
};

struct Building {
  std::string name;
  Footprint footprint;
  double height = 0;
};

// Extra buildings scattered with the spec seed.
struct RandomBuildings {
  int count = 0;
  double min_size = 10, max_size = 30;
  double min_height = 10, max_height = 40;
  double gap = 5;  // minimum clearance to every other footprint
};

// Box-building city on a flat ground rectangle [0, width] x [0, depth].
struct SceneSpec {
  double width = 100, depth = 100;
  std::vector<Building> buildings;
  std::optional<Building> tower;
  RandomBuildings random;
  std::uint64_t seed = 0;

  // Fixed buildings plus the tower plus the seeded random ones, validated.
  std::vector<Building> resolved_buildings() const;
};

// Throws ValidationError naming the offending buildings.
void validate_scene_spec(const SceneSpec& spec);

// Ground sheet with rectangular openings, closed over by each building's
// walls and roof, so vertical columns cross the surface an odd number of
// times below it. Deterministic for a fixed spec.
TriMesh generate_scene(const SceneSpec& spec);

// Three-building reference city: two 35 m blocks and a 55 m tower.
SceneSpec reference_scene_spec();

}  // namespace ovp
