#pragma once

#include <span>
#include <string>
#include <vector>

#include "ovp/bvh.hpp"
#include "ovp/sampling.hpp"

namespace ovp {

enum class ViewState { initial, kept, replaced, dropped };

std::string to_string(ViewState s);
ViewState view_state_from_string(const std::string& s);

struct ViewPoint {
  Vec3 position = Vec3::Zero();
  Vec3 direction = -Vec3::UnitZ();  // unit
  std::uint32_t id = 0;
  ViewState state = ViewState::initial;
};

// Sparse sample/view incidence. rows[s] lists the views seeing sample s,
// cols[v] the samples seen by view v; both sorted and mutually transposed.
struct VisibilityMatrix {
  std::size_t n_samples = 0;
  std::size_t n_views = 0;
  std::vector<std::vector<std::uint32_t>> rows;
  std::vector<std::vector<std::uint32_t>> cols;

  bool visible(std::uint32_t sample, std::uint32_t view) const;
  std::size_t nonzeros() const;

  static VisibilityMatrix from_columns(std::size_t n_samples, std::vector<std::vector<std::uint32_t>> cols);
};

// Ray origin is pulled this far toward the sample before testing occlusion.
inline constexpr double kOcclusionEpsilon = 1e-3;

// Range, circular frustum cone (half-angle fov/2), incidence, and a
// first-hit occlusion test against the proxy mesh.
bool is_visible(const SurfaceSample& sample, const ViewPoint& view, const CameraModel& camera, const Bvh& accel);

VisibilityMatrix build_matrix(std::span<const SurfaceSample> samples, std::span<const ViewPoint> views,
                              const CameraModel& camera, const Bvh& accel, unsigned threads = 0);

// CSV triples "sample_id,view_id", one per visible pair.
void write_matrix_csv(const VisibilityMatrix& vis, const std::string& path);

}  // namespace ovp
