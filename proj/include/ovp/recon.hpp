#pragma once

#include <array>
#include <limits>
#include <span>
#include <vector>

#include "ovp/visibility.hpp"

namespace ovp {

struct PairGeometry {
  double alpha = 0;    // triangulation angle at the sample, radians
  double d_m = 0;      // larger of the two view distances, meters
  double theta_m = 0;  // larger of the two incidence angles, radians
};

// w1 rises with alpha (logistic at alpha1), w3 falls with alpha (logistic
// at alpha3), w2 falls linearly to zero at d_max.
struct ReconWeights {
  double k1 = 32.0;
  double alpha1 = kPi / 16.0;
  double k3 = 8.0;
  double alpha3 = kPi / 4.0;
  double d_max = 160.0;

  void validate() const;
  double w1(double alpha) const;
  double w2(double d) const;
  double w3(double alpha) const;
};

PairGeometry pair_geometry(const SurfaceSample& s, const Vec3& vi, const Vec3& vj);

// q = w1(alpha) w2(d_m) w3(alpha) max(cos theta_m, 0), in [0, 1].
double pair_q(const PairGeometry& g, const ReconWeights& w);

// Everything the reconstructability terms read: sample geometry, view
// positions, visibility, and the weights.
struct ReconContext {
  std::span<const SurfaceSample> samples;
  std::span<const ViewPoint> views;
  const VisibilityMatrix* vis = nullptr;
  ReconWeights weights;

  double q(std::uint32_t sample, std::uint32_t vi, std::uint32_t vj) const {
    return pair_q(pair_geometry(samples[sample], views[vi].position, views[vj].position), weights);
  }
};

// Sum of q over unordered pairs of views in view_set that both see the
// sample. view_set must be sorted ascending without duplicates.
double sample_h(std::uint32_t sample, std::span<const std::uint32_t> view_set, const ReconContext& ctx);

// Sentinel for a view that observes nothing: removable for free.
inline constexpr double kSeesNone = std::numeric_limits<double>::infinity();

// min over samples seen by view of sample_h(s, view_set); kSeesNone when the
// view sees no sample.
double view_redundancy(std::uint32_t view, std::span<const std::uint32_t> view_set, const ReconContext& ctx);

inline constexpr int kLevelCount = 6;

struct ReconReport {
  std::vector<double> h;
  std::vector<int> level;  // 1..6; 6 = observed by no view
  std::array<std::size_t, kLevelCount> counts{};
  std::array<double, kLevelCount> percent{};
  std::vector<double> redundancy;  // per view id of the evaluated set, may be empty
};

// Level VI when the sample has no observer; otherwise I..V at h >= 4, 3, 2,
// 1 times t_h, else V. Throws ValidationError for t_h <= 0.
int level_of(double h, bool observed, double t_h);
ReconReport quantize_levels(std::span<const double> h, std::span<const std::size_t> observer_count, double t_h);

// Full evaluation of a view set over all samples.
ReconReport evaluate_views(std::span<const std::uint32_t> view_set, const ReconContext& ctx, double t_h,
                           unsigned threads = 0);

Rgb level_color(int level);

}  // namespace ovp
