#pragma once

#include <array>
#include <memory>
#include <vector>

#include "ovp/mesh.hpp"

namespace ovp {

struct SafeZoneParams {
  double margin = 20.0;       // dilation distance, meters
  double cell = 2.0;          // voxel edge, meters; must be <= margin / 2
  double ground_floor = 5.0;  // minimum legal flight altitude
  std::size_t max_voxels = std::size_t{1} << 30;  // memory budget, one byte per voxel
  unsigned threads = 0;
};

// Voxelized forbidden airspace around a proxy mesh. A voxel is forbidden
// when its center lies within `margin` of the surface or inside the closed
// solid. Immutable after construction.
class SafeZone {
 public:
  const TriMesh& source() const { return *source_; }
  double margin() const { return margin_; }
  double cell() const { return cell_; }
  double ground_floor() const { return ground_floor_; }
  const Vec3& origin() const { return origin_; }
  const std::array<std::size_t, 3>& dims() const { return dims_; }
  bool interior_filled() const { return interior_filled_; }

  bool is_free(const Vec3& p) const;
  // Exact voxel traversal of the segment; no sampling gaps.
  bool segment_free(const Vec3& a, const Vec3& b) const;

  bool forbidden(std::size_t i, std::size_t j, std::size_t k) const {
    return occupancy_[(k * dims_[1] + j) * dims_[0] + i] != 0;
  }
  Vec3 voxel_center(std::size_t i, std::size_t j, std::size_t k) const {
    return origin_ + cell_ * Vec3(i + 0.5, j + 0.5, k + 0.5);
  }
  std::size_t forbidden_count() const;
  std::vector<Vec3> forbidden_centers() const;

  // Top face of the highest forbidden voxel (or the ground floor when that
  // is higher). Everything strictly above is free.
  double max_forbidden_altitude() const { return max_forbidden_z_; }

 private:
  friend SafeZone dilate(const TriMesh& mesh, const SafeZoneParams& params);

  std::shared_ptr<const TriMesh> source_;
  double margin_ = 0, cell_ = 0, ground_floor_ = 0;
  Vec3 origin_ = Vec3::Zero();
  std::array<std::size_t, 3> dims_{0, 0, 0};
  std::vector<std::uint8_t> occupancy_;
  bool interior_filled_ = false;
  double max_forbidden_z_ = 0;
};

// Throws ValidationError for margin <= 0, cell > margin / 2, or a grid
// larger than params.max_voxels (message carries the required size).
SafeZone dilate(const TriMesh& mesh, const SafeZoneParams& params);

}  // namespace ovp
