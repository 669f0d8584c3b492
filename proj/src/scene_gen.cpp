#include "ovp/scene_gen.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <tuple>

namespace ovp {

namespace {

void check_building(const SceneSpec& spec, const Building& b) {
  const auto& f = b.footprint;
  if (!(b.height > 0)) throw ValidationError("building '" + b.name + "' has non-positive height");
  if (!(f.x0 < f.x1 && f.y0 < f.y1)) {
    throw ValidationError("building '" + b.name + "' has an empty footprint");
  }
  if (!(f.x0 > 0 && f.y0 > 0 && f.x1 < spec.width && f.y1 < spec.depth)) {
    throw ValidationError("building '" + b.name + "' footprint is not strictly inside the ground extent");
  }
}

void check_overlaps(const std::vector<Building>& all) {
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      if (all[i].footprint.intersects(all[j].footprint)) {
        throw ValidationError("buildings '" + all[i].name + "' and '" + all[j].name +
                              "' have overlapping footprints");
      }
    }
  }
}

}  // namespace

std::vector<Building> SceneSpec::resolved_buildings() const {
  if (!(width > 0 && depth > 0)) throw ValidationError("ground extent must be positive");
  std::vector<Building> all = buildings;
  if (tower) all.push_back(*tower);
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (all[i].name.empty()) all[i].name = "building_" + std::to_string(i);
    check_building(*this, all[i]);
  }
  check_overlaps(all);

  if (random.count > 0) {
    const auto& r = random;
    if (!(r.min_size > 0 && r.min_size <= r.max_size && r.min_height > 0 && r.min_height <= r.max_height &&
          r.gap >= 0)) {
      throw ValidationError("invalid random_buildings ranges");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> size(r.min_size, r.max_size);
    std::uniform_real_distribution<double> height(r.min_height, r.max_height);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int placed = 0;
    for (int attempt = 0; placed < r.count && attempt < 1000 * r.count; ++attempt) {
      // Snap to a decimetre grid so vertices stay exactly representable.
      auto snap = [](double v) { return std::round(v * 10.0) / 10.0; };
      const double w = snap(size(rng)), d = snap(size(rng));
      const double h = snap(height(rng));
      const double x0 = snap(r.gap + unit(rng) * (width - w - 2 * r.gap));
      const double y0 = snap(r.gap + unit(rng) * (depth - d - 2 * r.gap));
      Building b{"random_" + std::to_string(placed), {x0, y0, x0 + w, y0 + d}, h};
      if (!(x0 > 0 && y0 > 0 && b.footprint.x1 < width && b.footprint.y1 < depth)) continue;
      const Footprint grown{x0 - r.gap, y0 - r.gap, b.footprint.x1 + r.gap, b.footprint.y1 + r.gap};
      const bool clash = std::any_of(all.begin(), all.end(),
                                     [&](const Building& o) { return grown.intersects(o.footprint); });
      if (clash) continue;
      all.push_back(b);
      ++placed;
    }
    if (placed < r.count) {
      throw ValidationError("could only place " + std::to_string(placed) + " of " + std::to_string(r.count) +
                            " random buildings");
    }
  }
  return all;
}

void validate_scene_spec(const SceneSpec& spec) { (void)spec.resolved_buildings(); }

TriMesh generate_scene(const SceneSpec& spec) {
  const std::vector<Building> all = spec.resolved_buildings();

  std::vector<double> xs{0.0, spec.width}, ys{0.0, spec.depth};
  for (const auto& b : all) {
    xs.push_back(b.footprint.x0);
    xs.push_back(b.footprint.x1);
    ys.push_back(b.footprint.y0);
    ys.push_back(b.footprint.y1);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  const std::size_t nx = xs.size() - 1, ny = ys.size() - 1;

  std::vector<double> cell_height(nx * ny, 0.0);
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const double cx = 0.5 * (xs[i] + xs[i + 1]), cy = 0.5 * (ys[j] + ys[j + 1]);
      for (const auto& b : all) {
        const auto& f = b.footprint;
        if (cx > f.x0 && cx < f.x1 && cy > f.y0 && cy < f.y1) cell_height[i * ny + j] = b.height;
      }
    }
  }
  auto height_at = [&](std::size_t i, std::size_t j) { return cell_height[i * ny + j]; };

  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
  std::map<std::tuple<std::size_t, std::size_t, double>, std::uint32_t> vertex_ids;
  auto vid = [&](std::size_t i, std::size_t j, double z) {
    auto [it, inserted] = vertex_ids.try_emplace({i, j, z}, static_cast<std::uint32_t>(vertices.size()));
    if (inserted) vertices.emplace_back(xs[i], ys[j], z);
    return it->second;
  };
  auto quad = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d) {
    triangles.push_back({a, b, c});
    triangles.push_back({a, c, d});
  };

  // Horizontal faces: ground cells and roofs, facing +z.
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const double z = height_at(i, j);
      quad(vid(i, j, z), vid(i + 1, j, z), vid(i + 1, j + 1, z), vid(i, j + 1, z));
    }
  }
  // Walls between cells of different height, facing the lower cell.
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 1; j < ny; ++j) {
      const double south = height_at(i, j - 1), north = height_at(i, j);
      if (south == north) continue;
      const double lo = std::min(south, north), hi = std::max(south, north);
      if (north > south) {  // faces -y
        quad(vid(i, j, lo), vid(i + 1, j, lo), vid(i + 1, j, hi), vid(i, j, hi));
      } else {  // faces +y
        quad(vid(i + 1, j, lo), vid(i, j, lo), vid(i, j, hi), vid(i + 1, j, hi));
      }
    }
  }
  for (std::size_t i = 1; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const double west = height_at(i - 1, j), east = height_at(i, j);
      if (west == east) continue;
      const double lo = std::min(west, east), hi = std::max(west, east);
      if (east > west) {  // faces -x
        quad(vid(i, j + 1, lo), vid(i, j, lo), vid(i, j, hi), vid(i, j + 1, hi));
      } else {  // faces +x
        quad(vid(i, j, lo), vid(i, j + 1, lo), vid(i, j + 1, hi), vid(i, j, hi));
      }
    }
  }
  return TriMesh::from_raw(std::move(vertices), std::move(triangles));
}

SceneSpec reference_scene_spec() {
  SceneSpec spec;
  spec.width = 200;
  spec.depth = 200;
  spec.buildings = {
      {"block_a", {50, 60, 90, 140}, 35},
      {"block_b", {105, 60, 145, 110}, 35},
  };
  spec.tower = Building{"tower", {110, 125, 135, 150}, 55};
  spec.seed = 7;
  return spec;
}

}  // namespace ovp
