#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "ovp/baseline.hpp"
#include "ovp/planner.hpp"
#include "ovp/safe_zone.hpp"
#include "ovp/scene_gen.hpp"
#include "ovp/trajectory.hpp"

namespace ovp {

inline constexpr const char* kConfigSchema = "ovp.config";
inline constexpr const char* kSceneSchema = "ovp.scene";

// Where the proxy mesh comes from: a mesh file, a scene spec file, or an
// inline spec. Exactly one is set after loading.
struct SceneSource {
  std::optional<std::filesystem::path> mesh;
  std::optional<SceneSpec> spec;
};

struct RunConfig {
  SceneSource scene;
  std::optional<std::filesystem::path> output;
  unsigned threads = 0;
  std::uint64_t seed = 1;  // default for the sampling and GA seeds

  CameraModel camera;
  double overlap = 0.85;
  std::uint64_t sampling_seed = 1;
  PoissonOptions poisson;
  SafeZoneParams safe_zone;
  PlannerConfig planner;
  bool neighbor_radius_auto = true;  // rho = 2 * disk radius
  ReconWeights weights;
  bool d_max_auto = true;            // d_max = 2 * view_distance
  ClusterSpec cluster;
  FlightParams flight;
  bool launch_auto = true;           // launch at the scene's min corner
  GaParams ga;
  std::uint64_t ga_seed = 1;
  ObliqueConfig baseline;

  // Re-validates every housed type. Throws ValidationError.
  void validate() const;
  // Replaces the master seed and every seed derived from it.
  void override_seed(std::uint64_t s);
};

// Parses a config document. Relative paths resolve against the config's
// directory; referenced files must exist (IoError otherwise). Unknown keys
// are rejected. Throws ValidationError for malformed content.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir);

SceneSpec load_scene_spec(const std::filesystem::path& path);
SceneSpec parse_scene_spec(const std::string& text);
std::string scene_spec_to_json(const SceneSpec& spec);

}  // namespace ovp
