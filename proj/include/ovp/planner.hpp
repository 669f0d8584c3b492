#pragma once

#include <span>
#include <string>
#include <vector>

#include "ovp/recon.hpp"
#include "ovp/safe_zone.hpp"

namespace ovp {

struct PlannerConfig {
  double t_h = 0.2;
  double rotation_step = 5.0 * kPi / 180.0;
  double neighbor_radius = 30.0;              // rho of the substitution neighborhood
  double neighbor_angle = 30.0 * kPi / 180.0;  // beta of the substitution neighborhood
  int max_substitution_rounds = 10;

  void validate() const;
};

// One candidate per sample at s + d n looking along -n. Candidates inside
// forbidden airspace are swung upward about the sample (distance kept,
// re-aimed at s) in rotation_step increments until free with incidence
// within the camera limit; otherwise they come back with state dropped.
std::vector<ViewPoint> initial_viewpoints(std::span<const SurfaceSample> samples, const CameraModel& camera,
                                          const SafeZone& zone, const PlannerConfig& cfg);

struct AuditEntry {
  enum class Kind { remove, rollback, substitute };
  Kind kind = Kind::remove;
  std::uint32_t view = 0;
  std::uint32_t replacement = 0;  // substitute only
  double value = 0;               // redundancy for remove/rollback, H gain for substitute
};

std::string to_string(AuditEntry::Kind k);

struct PlanResult {
  std::vector<ViewPoint> views;      // every initial viewpoint with its final state
  std::vector<std::uint32_t> kept;   // V*, ascending ids (states kept or replaced)
  std::vector<double> h;             // per-sample h(s, V*), recomputed from scratch
  std::vector<std::uint32_t> infeasible_samples;  // cannot exceed t_h even with every candidate
  std::vector<AuditEntry> audit;
  std::size_t initial_count = 0;
  std::size_t dropped_count = 0;
  std::size_t removed_count = 0;
  std::size_t substituted_count = 0;
  std::size_t rollback_count = 0;
};

// Two-step reduction: greedy removal of the most redundant view under the
// h > t_h constraint, then neighborhood substitution that strictly raises
// the total reconstructability without breaking a satisfied constraint.
// Throws ValidationError when vis does not match the inputs.
PlanResult optimize(std::span<const ViewPoint> initial, std::span<const SurfaceSample> samples,
                    const VisibilityMatrix& vis, const ReconWeights& weights, const PlannerConfig& cfg);

// Applies the audit log to the non-dropped initial set.
std::vector<std::uint32_t> replay_audit(std::span<const ViewPoint> initial, std::span<const AuditEntry> audit);

}  // namespace ovp
