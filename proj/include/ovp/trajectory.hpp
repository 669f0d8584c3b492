#pragma once

#include <span>
#include <string>
#include <vector>

#include "ovp/safe_zone.hpp"
#include "ovp/visibility.hpp"

namespace ovp {

struct EdgeCost {
  double length = 0;  // meters
  double angle = 0;   // radians between view directions
  double cost = 0;    // length * exp(angle / max(length, kLengthFloor))
};

inline constexpr double kLengthFloor = 1.0;

EdgeCost edge_cost(const ViewPoint& a, const ViewPoint& b);

enum class ClusterStrategy { direction, height, hybrid };

std::string to_string(ClusterStrategy s);
ClusterStrategy cluster_strategy_from_string(const std::string& s);

struct ClusterSpec {
  ClusterStrategy strategy = ClusterStrategy::hybrid;
  std::size_t capacity = 40;
  std::size_t direction_bins = 6;
  double height_band = 20.0;
  int lloyd_iterations = 20;

  void validate() const;
};

// Partition of view indices (positions into `views`); each cluster sorted,
// clusters ordered by their smallest member.
using Cluster = std::vector<std::uint32_t>;
std::vector<Cluster> cluster(std::span<const ViewPoint> views, const ClusterSpec& spec);

struct GaParams {
  std::size_t population = 100;
  std::size_t generations = 500;
  std::size_t tournament = 4;
  double mutation = 0.2;
  std::size_t elites = 2;

  void validate() const;
};

struct Tour {
  std::vector<std::uint32_t> order;  // indices into the views handed to solve_tour
  double cost = 0;
};

// Open path over every view starting at the one nearest `launch` (no return
// leg) by a permutation GA: order crossover, swap mutation, tournament
// selection, elitism. The initial population includes the identity and
// nearest-neighbour orders, so the result never costs more than either.
Tour solve_tour(std::span<const ViewPoint> views, const Vec3& launch, std::uint64_t seed, const GaParams& ga = {});

double path_cost(std::span<const ViewPoint> views, std::span<const std::uint32_t> order);
std::vector<std::uint32_t> nearest_neighbor_order(std::span<const ViewPoint> views, std::uint32_t start);

struct FlightParams {
  double speed = 5.0;              // m/s
  double trigger_interval = 3.0;   // s
  double endurance = 1500.0;       // s
  double hover = 2.0;              // s per viewpoint
  Vec3 launch = Vec3::Zero();

  void validate() const;
};

enum class WaypointKind { view_point, interpolated };

struct Waypoint {
  Vec3 position = Vec3::Zero();
  Vec3 direction = -Vec3::UnitZ();
  bool trigger = false;
  WaypointKind kind = WaypointKind::view_point;
  std::int64_t view_id = -1;  // source viewpoint id for kind view_point
};

struct Sortie {
  std::size_t cluster = 0;
  std::vector<Waypoint> waypoints;
  double length = 0;  // meters
  double time = 0;    // seconds, flight plus hover
  std::size_t view_point_images = 0;
  std::size_t interpolated_images = 0;
};

struct FlightPlan {
  std::vector<Sortie> sorties;
  FlightParams params;

  std::size_t view_point_images() const;
  std::size_t interpolated_images() const;
};

// Cuts one ordered tour into endurance-feasible sorties, detours blocked
// legs vertically above the forbidden airspace, and inserts camera triggers
// every speed * interval meters. Throws InfeasibleError when a single leg
// cannot fit into one sortie or a detour is itself blocked.
std::vector<Sortie> split_and_interpolate(std::span<const ViewPoint> tour, const FlightParams& params,
                                          const SafeZone& zone, std::size_t cluster_index = 0);

// Slerp between unit vectors.
Vec3 slerp(const Vec3& a, const Vec3& b, double t);

}  // namespace ovp
