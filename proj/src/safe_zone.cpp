#include "ovp/safe_zone.hpp"

#include <algorithm>
#include <cmath>

namespace ovp {

namespace {

// Edge p->q owns points lying exactly on it under this rule; the reversed
// edge does not, so a shared edge counts once.
bool owns_edge(double dx, double dy) { return dy < 0 || (dy == 0 && dx < 0); }

// Point-in-triangle in the xy projection with a consistent tie rule.
// Requires counter-clockwise (a, b, c).
bool inside_ccw(const Eigen::Vector2d& p, const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                const Eigen::Vector2d& c) {
  const Eigen::Vector2d* v[3] = {&a, &b, &c};
  for (int e = 0; e < 3; ++e) {
    const Eigen::Vector2d& s = *v[e];
    const Eigen::Vector2d& t = *v[(e + 1) % 3];
    const double dx = t.x() - s.x(), dy = t.y() - s.y();
    const double w = dx * (p.y() - s.y()) - dy * (p.x() - s.x());
    if (w < 0) return false;
    if (w == 0 && !owns_edge(dx, dy)) return false;
  }
  return true;
}

}  // namespace

SafeZone dilate(const TriMesh& mesh, const SafeZoneParams& params) {
  if (!(params.margin > 0)) throw ValidationError("safe zone margin must be positive");
  if (!(params.cell > 0) || params.cell > params.margin / 2) {
    throw ValidationError("safe zone cell must be in (0, margin/2]");
  }
  if (mesh.empty()) throw ValidationError("cannot dilate an empty mesh");

  SafeZone zone;
  zone.source_ = std::make_shared<const TriMesh>(mesh);
  zone.margin_ = params.margin;
  zone.cell_ = params.cell;
  zone.ground_floor_ = params.ground_floor;

  const Aabb box = mesh.bounds();
  const double pad = params.margin + params.cell;
  zone.origin_ = box.min - Vec3::Constant(pad);
  const Vec3 span = box.extent() + Vec3::Constant(2 * pad);
  long double total = 1;
  for (int a = 0; a < 3; ++a) {
    zone.dims_[a] = static_cast<std::size_t>(std::ceil(span[a] / params.cell));
    total *= zone.dims_[a];
  }
  if (total > static_cast<long double>(params.max_voxels)) {
    throw ValidationError("safe zone grid needs " + std::to_string(static_cast<unsigned long long>(total)) +
                          " voxels (" + std::to_string(zone.dims_[0]) + "x" + std::to_string(zone.dims_[1]) +
                          "x" + std::to_string(zone.dims_[2]) + "), budget is " +
                          std::to_string(params.max_voxels));
  }
  const auto [nx, ny, nz] = zone.dims_;
  zone.occupancy_.assign(nx * ny * nz, 0);

  const double cell = params.cell;
  const double margin2 = params.margin * params.margin;
  const Vec3 origin = zone.origin_;
  auto index_range = [&](double lo, double hi, int axis, std::size_t n) {
    // Voxels whose centers fall in [lo, hi].
    const double a = std::ceil((lo - origin[axis]) / cell - 0.5);
    const double b = std::floor((hi - origin[axis]) / cell - 0.5);
    const long first = std::max(0L, static_cast<long>(a));
    const long last = std::min(static_cast<long>(n) - 1, static_cast<long>(b));
    return std::pair<long, long>{first, last};
  };

  std::vector<Aabb> tri_boxes(mesh.triangle_count());
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    for (int k = 0; k < 3; ++k) tri_boxes[t].extend(mesh.corner(t, k));
  }

  // Surface band, one z-slab per task so writes never overlap.
  parallel_for(nz, params.threads, [&](std::size_t k) {
    const double zc = origin.z() + (k + 0.5) * cell;
    std::uint8_t* slab = zone.occupancy_.data() + k * nx * ny;
    for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
      const Aabb& tb = tri_boxes[t];
      if (zc < tb.min.z() - params.margin || zc > tb.max.z() + params.margin) continue;
      const auto [i0, i1] = index_range(tb.min.x() - params.margin, tb.max.x() + params.margin, 0, nx);
      const auto [j0, j1] = index_range(tb.min.y() - params.margin, tb.max.y() + params.margin, 1, ny);
      const Vec3& a = mesh.corner(t, 0);
      const Vec3& b = mesh.corner(t, 1);
      const Vec3& c = mesh.corner(t, 2);
      for (long j = j0; j <= j1; ++j) {
        for (long i = i0; i <= i1; ++i) {
          std::uint8_t& cellv = slab[j * nx + i];
          if (cellv) continue;
          const Vec3 p(origin.x() + (i + 0.5) * cell, origin.y() + (j + 0.5) * cell, zc);
          if ((closest_point_on_triangle(p, a, b, c) - p).squaredNorm() <= margin2) cellv = 1;
        }
      }
    }
  });

  if (mesh.is_parity_closed()) {
    zone.interior_filled_ = true;
    std::vector<std::vector<double>> crossings(nx * ny);
    for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
      Eigen::Vector2d a = mesh.corner(t, 0).head<2>();
      Eigen::Vector2d b = mesh.corner(t, 1).head<2>();
      Eigen::Vector2d c = mesh.corner(t, 2).head<2>();
      const double area2 = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
      if (area2 == 0) continue;  // vertical faces never cross a vertical line
      if (area2 < 0) std::swap(b, c);
      const Vec3 n = mesh.normals()[t];
      const Vec3& p0 = mesh.corner(t, 0);
      const Aabb& tb = tri_boxes[t];
      const auto [i0, i1] = index_range(tb.min.x(), tb.max.x(), 0, nx);
      const auto [j0, j1] = index_range(tb.min.y(), tb.max.y(), 1, ny);
      for (long j = j0; j <= j1; ++j) {
        for (long i = i0; i <= i1; ++i) {
          const Eigen::Vector2d p(origin.x() + (i + 0.5) * cell, origin.y() + (j + 0.5) * cell);
          if (!inside_ccw(p, a, b, c)) continue;
          const double z = p0.z() - (n.x() * (p.x() - p0.x()) + n.y() * (p.y() - p0.y())) / n.z();
          crossings[j * nx + i].push_back(z);
        }
      }
    }
    parallel_for(ny, params.threads, [&](std::size_t j) {
      for (std::size_t i = 0; i < nx; ++i) {
        auto& zs = crossings[j * nx + i];
        if (zs.empty()) continue;
        std::sort(zs.begin(), zs.end());
        for (std::size_t k = 0; k < nz; ++k) {
          const double zc = origin.z() + (k + 0.5) * cell;
          const auto above = zs.end() - std::upper_bound(zs.begin(), zs.end(), zc);
          if (above % 2 == 1) zone.occupancy_[(k * ny + j) * nx + i] = 1;
        }
      }
    });
  } else {
    log_warning("mesh is not closed; safe zone covers the surface band only");
  }

  zone.max_forbidden_z_ = params.ground_floor;
  for (std::size_t k = nz; k-- > 0 && zone.max_forbidden_z_ == params.ground_floor;) {
    const std::uint8_t* slab = zone.occupancy_.data() + k * nx * ny;
    if (std::any_of(slab, slab + nx * ny, [](std::uint8_t v) { return v != 0; })) {
      zone.max_forbidden_z_ = std::max(params.ground_floor, origin.z() + (k + 1) * cell);
    }
  }
  return zone;
}

bool SafeZone::is_free(const Vec3& p) const {
  if (!(p.z() >= ground_floor_)) return false;
  const Vec3 g = (p - origin_) / cell_;
  std::array<long, 3> idx;
  for (int a = 0; a < 3; ++a) {
    const double f = std::floor(g[a]);
    if (f < 0 || f >= static_cast<double>(dims_[a])) return true;
    idx[a] = static_cast<long>(f);
  }
  return !forbidden(idx[0], idx[1], idx[2]);
}

bool SafeZone::segment_free(const Vec3& a, const Vec3& b) const {
  if (!(a.z() >= ground_floor_) || !(b.z() >= ground_floor_)) return false;
  const Vec3 ga = (a - origin_) / cell_;
  const Vec3 gb = (b - origin_) / cell_;
  const Vec3 d = gb - ga;

  // Clip to the grid box [0, dims].
  double t0 = 0.0, t1 = 1.0;
  for (int ax = 0; ax < 3; ++ax) {
    const double lo = 0.0, hi = static_cast<double>(dims_[ax]);
    if (d[ax] == 0.0) {
      if (ga[ax] < lo || ga[ax] >= hi) return true;
      continue;
    }
    double ta = (lo - ga[ax]) / d[ax];
    double tb = (hi - ga[ax]) / d[ax];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  if (t0 > t1) return true;

  const Vec3 start = ga + t0 * d;
  std::array<long, 3> cellidx, step;
  std::array<double, 3> t_max, t_delta;
  for (int ax = 0; ax < 3; ++ax) {
    long c = static_cast<long>(std::floor(start[ax]));
    c = std::clamp<long>(c, 0, static_cast<long>(dims_[ax]) - 1);
    cellidx[ax] = c;
    if (d[ax] > 0) {
      step[ax] = 1;
      t_max[ax] = (c + 1 - ga[ax]) / d[ax];
      t_delta[ax] = 1.0 / d[ax];
    } else if (d[ax] < 0) {
      step[ax] = -1;
      t_max[ax] = (c - ga[ax]) / d[ax];
      t_delta[ax] = -1.0 / d[ax];
    } else {
      step[ax] = 0;
      t_max[ax] = std::numeric_limits<double>::infinity();
      t_delta[ax] = std::numeric_limits<double>::infinity();
    }
  }
  for (;;) {
    if (forbidden(cellidx[0], cellidx[1], cellidx[2])) return false;
    int ax = 0;
    if (t_max[1] < t_max[ax]) ax = 1;
    if (t_max[2] < t_max[ax]) ax = 2;
    if (t_max[ax] > t1) return true;
    cellidx[ax] += step[ax];
    if (cellidx[ax] < 0 || cellidx[ax] >= static_cast<long>(dims_[ax])) return true;
    t_max[ax] += t_delta[ax];
  }
}

std::size_t SafeZone::forbidden_count() const {
  return static_cast<std::size_t>(std::count_if(occupancy_.begin(), occupancy_.end(), [](auto v) { return v != 0; }));
}

std::vector<Vec3> SafeZone::forbidden_centers() const {
  std::vector<Vec3> out;
  for (std::size_t k = 0; k < dims_[2]; ++k) {
    for (std::size_t j = 0; j < dims_[1]; ++j) {
      for (std::size_t i = 0; i < dims_[0]; ++i) {
        if (forbidden(i, j, k)) out.push_back(voxel_center(i, j, k));
      }
    }
  }
  return out;
}

}  // namespace ovp
