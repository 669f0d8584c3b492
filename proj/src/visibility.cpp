#include "ovp/visibility.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace ovp {

std::string to_string(ViewState s) {
  switch (s) {
    case ViewState::initial: return "initial";
    case ViewState::kept: return "kept";
    case ViewState::replaced: return "replaced";
    case ViewState::dropped: return "dropped";
  }
  return "initial";
}

ViewState view_state_from_string(const std::string& s) {
  if (s == "initial") return ViewState::initial;
  if (s == "kept") return ViewState::kept;
  if (s == "replaced") return ViewState::replaced;
  if (s == "dropped") return ViewState::dropped;
  throw ValidationError("unknown viewpoint state '" + s + "'");
}

bool VisibilityMatrix::visible(std::uint32_t sample, std::uint32_t view) const {
  const auto& r = rows[sample];
  return std::binary_search(r.begin(), r.end(), view);
}

std::size_t VisibilityMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& c : cols) n += c.size();
  return n;
}

VisibilityMatrix VisibilityMatrix::from_columns(std::size_t n_samples, std::vector<std::vector<std::uint32_t>> cols) {
  VisibilityMatrix m;
  m.n_samples = n_samples;
  m.n_views = cols.size();
  m.rows.assign(n_samples, {});
  for (std::uint32_t v = 0; v < cols.size(); ++v) {
    auto& c = cols[v];
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (auto s : c) {
      if (s >= n_samples) throw ValidationError("visibility sample id out of range");
      m.rows[s].push_back(v);  // ascending v keeps rows sorted
    }
  }
  m.cols = std::move(cols);
  return m;
}

bool is_visible(const SurfaceSample& sample, const ViewPoint& view, const CameraModel& camera, const Bvh& accel) {
  const Vec3 to_sample = sample.position - view.position;
  const double dist = to_sample.norm();
  if (!(dist <= camera.max_range) || dist <= kOcclusionEpsilon) return false;
  if (angle_between(view.direction, to_sample) > camera.fov / 2) return false;
  if (angle_between(sample.normal, -to_sample) > camera.max_incidence) return false;
  const Ray ray{view.position, to_sample / dist};
  return !accel.any_hit(ray, 0.0, dist - kOcclusionEpsilon);
}

VisibilityMatrix build_matrix(std::span<const SurfaceSample> samples, std::span<const ViewPoint> views,
                              const CameraModel& camera, const Bvh& accel, unsigned threads) {
  std::vector<std::vector<std::uint32_t>> cols(views.size());
  parallel_for(views.size(), threads, [&](std::size_t v) {
    auto& col = cols[v];
    for (std::uint32_t s = 0; s < samples.size(); ++s) {
      if (is_visible(samples[s], views[v], camera, accel)) col.push_back(s);
    }
  });
  return VisibilityMatrix::from_columns(samples.size(), std::move(cols));
}

void write_matrix_csv(const VisibilityMatrix& vis, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "sample_id,view_id\n";
  for (std::uint32_t s = 0; s < vis.rows.size(); ++s) {
    for (auto v : vis.rows[s]) out << s << ',' << v << '\n';
  }
}

}  // namespace ovp
