#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ovp/config.hpp"
#include "ovp/recon.hpp"

namespace ovp {

using StageTimings = std::vector<std::pair<std::string, double>>;  // stage, seconds

std::shared_ptr<const TriMesh> load_scene_mesh(const RunConfig& cfg);

// Surface samples shared by plan and evaluate: one seed, one disk radius.
std::vector<SurfaceSample> sample_scene(const TriMesh& mesh, const RunConfig& cfg);

// Samples whose normal is within 60 degrees of horizontal.
bool is_facade(const SurfaceSample& s);
double facade_mean_h(std::span<const SurfaceSample> samples, std::span<const double> h);

struct PlanRun {
  std::shared_ptr<const TriMesh> mesh;
  SamplingParams sampling;
  std::vector<SurfaceSample> samples;
  SafeZone zone;
  std::vector<ViewPoint> initial;
  VisibilityMatrix vis;
  PlanResult plan;
  ReconReport report;
  std::vector<Cluster> clusters;
  FlightPlan flight;
  StageTimings timings;
};

// Safe zone, sampling, initial viewpoints, visibility, optimization,
// clustering, tours and sorties. Throws InfeasibleError from the flight
// stage.
PlanRun run_plan(const RunConfig& cfg);
void write_plan_artifacts(const PlanRun& run, const RunConfig& cfg, const std::filesystem::path& dir);

struct EvalRun {
  std::vector<SurfaceSample> samples;
  std::vector<ViewPoint> views;
  ReconReport report;
  double facade_mean = 0;
};

EvalRun run_evaluate(const TriMesh& mesh, std::vector<ViewPoint> views, const RunConfig& cfg);
void write_eval_artifacts(const EvalRun& run, const std::filesystem::path& dir);

std::vector<ViewPoint> run_baseline(const TriMesh& mesh, const RunConfig& cfg);

}  // namespace ovp
