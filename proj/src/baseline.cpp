#include "ovp/baseline.hpp"

#include <cmath>

namespace ovp {

ObliqueGrid oblique_grid(const Aabb& bounds, const ObliqueConfig& cfg) {
  cfg.camera.validate();
  if (!(cfg.forward_overlap >= 0 && cfg.forward_overlap < 1 && cfg.side_overlap >= 0 && cfg.side_overlap < 1)) {
    throw ValidationError("oblique overlaps must lie in [0, 1)");
  }
  if (!(cfg.tilt >= 0 && cfg.tilt < kPi / 2)) throw ValidationError("oblique tilt must be in [0, pi/2)");
  const double scene_height = bounds.max.z() - bounds.min.z();
  if (!(cfg.height > scene_height)) {
    throw ValidationError("oblique flight height must exceed the scene height (" + std::to_string(scene_height) +
                          " m)");
  }
  ObliqueGrid g;
  g.footprint = 2.0 * cfg.height * std::tan(cfg.camera.fov / 2.0);
  g.forward_spacing = g.footprint * (1.0 - cfg.forward_overlap);
  g.side_spacing = g.footprint * (1.0 - cfg.side_overlap);
  if (!(g.forward_spacing > 0 && g.side_spacing > 0)) throw ValidationError("oblique spacing must be positive");
  const Vec3 e = bounds.extent();
  // The slack keeps an exact multiple (up to rounding in tan) from adding a station.
  auto count = [](double extent, double spacing) {
    return static_cast<std::size_t>(std::ceil(extent / spacing - 1e-9)) + 1;
  };
  g.stations_x = count(e.x(), g.forward_spacing);
  g.stations_y = count(e.y(), g.side_spacing);
  return g;
}

std::vector<ViewPoint> plan_oblique(const Aabb& bounds, const ObliqueConfig& cfg) {
  const ObliqueGrid g = oblique_grid(bounds, cfg);
  const Vec3 c = bounds.center();
  const double z = bounds.min.z() + cfg.height;
  const double x0 = c.x() - 0.5 * (g.stations_x - 1) * g.forward_spacing;
  const double y0 = c.y() - 0.5 * (g.stations_y - 1) * g.side_spacing;
  const double st = std::sin(cfg.tilt), ct = std::cos(cfg.tilt);
  const Vec3 dirs[5] = {Vec3(0, 0, -1), Vec3(st, 0, -ct), Vec3(-st, 0, -ct), Vec3(0, st, -ct), Vec3(0, -st, -ct)};

  std::vector<ViewPoint> views;
  views.reserve(g.stations_x * g.stations_y * 5);
  for (std::size_t line = 0; line < g.stations_y; ++line) {
    for (std::size_t k = 0; k < g.stations_x; ++k) {
      const std::size_t i = line % 2 == 0 ? k : g.stations_x - 1 - k;
      const Vec3 station(x0 + i * g.forward_spacing, y0 + line * g.side_spacing, z);
      for (const auto& d : dirs) {
        ViewPoint v;
        v.id = static_cast<std::uint32_t>(views.size());
        v.position = station;
        v.direction = d.normalized();
        v.state = ViewState::kept;
        views.push_back(v);
      }
    }
  }
  return views;
}

}  // namespace ovp
