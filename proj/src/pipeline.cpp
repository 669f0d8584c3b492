#include "ovp/pipeline.hpp"

#include <chrono>
#include <fstream>

#include <json.hpp>

#include "ovp/baseline.hpp"
#include "ovp/exports.hpp"
#include "ovp/format.hpp"
#include "ovp/mesh_io.hpp"

namespace ovp {

using nlohmann::json;

namespace {

class Stopwatch {
 public:
  explicit Stopwatch(StageTimings& out) : out_(out), t0_(std::chrono::steady_clock::now()) {}
  void lap(const char* stage) {
    const auto now = std::chrono::steady_clock::now();
    out_.emplace_back(stage, std::chrono::duration<double>(now - t0_).count());
    t0_ = now;
  }

 private:
  StageTimings& out_;
  std::chrono::steady_clock::time_point t0_;
};

ReconContext context(std::span<const SurfaceSample> samples, std::span<const ViewPoint> views,
                     const VisibilityMatrix& vis, const RunConfig& cfg) {
  ReconContext ctx;
  ctx.samples = samples;
  ctx.views = views;
  ctx.vis = &vis;
  ctx.weights = cfg.weights;
  return ctx;
}

json histogram_json(const ReconReport& r) {
  static const char* names[kLevelCount] = {"I", "II", "III", "IV", "V", "VI"};
  json counts = json::object(), percent = json::object();
  for (int l = 0; l < kLevelCount; ++l) {
    counts[names[l]] = r.counts[l];
    percent[names[l]] = r.percent[l];
  }
  return {{"counts", counts}, {"percent", percent}};
}

void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << doc.dump(1) << '\n';
}

}  // namespace

std::shared_ptr<const TriMesh> load_scene_mesh(const RunConfig& cfg) {
  if (cfg.scene.mesh) return std::make_shared<const TriMesh>(load_mesh(*cfg.scene.mesh));
  return std::make_shared<const TriMesh>(generate_scene(*cfg.scene.spec));
}

std::vector<SurfaceSample> sample_scene(const TriMesh& mesh, const RunConfig& cfg) {
  const SamplingParams sp = disk_radius(cfg.camera, cfg.overlap);
  return poisson_sample(mesh, sp.disk_radius, cfg.sampling_seed, cfg.poisson);
}

bool is_facade(const SurfaceSample& s) { return std::abs(s.normal.z()) < 0.5; }

double facade_mean_h(std::span<const SurfaceSample> samples, std::span<const double> h) {
  double sum = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (is_facade(samples[i])) {
      sum += h[i];
      ++n;
    }
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

PlanRun run_plan(const RunConfig& cfg) {
  PlanRun run;
  Stopwatch sw(run.timings);
  run.mesh = load_scene_mesh(cfg);
  const TriMesh& mesh = *run.mesh;
  sw.lap("load");

  SafeZoneParams zp = cfg.safe_zone;
  zp.threads = cfg.threads;
  run.zone = dilate(mesh, zp);
  sw.lap("safe_zone");

  run.sampling = disk_radius(cfg.camera, cfg.overlap);
  run.samples = poisson_sample(mesh, run.sampling.disk_radius, cfg.sampling_seed, cfg.poisson);
  sw.lap("sampling");

  PlannerConfig pc = cfg.planner;
  if (cfg.neighbor_radius_auto) pc.neighbor_radius = 2.0 * run.sampling.disk_radius;
  run.initial = initial_viewpoints(run.samples, cfg.camera, run.zone, pc);
  sw.lap("initial_viewpoints");

  const Bvh bvh(mesh);
  sw.lap("bvh");
  run.vis = build_matrix(run.samples, run.initial, cfg.camera, bvh, cfg.threads);
  sw.lap("visibility");

  run.plan = optimize(run.initial, run.samples, run.vis, cfg.weights, pc);
  sw.lap("optimize");

  run.report = evaluate_views(run.plan.kept, context(run.samples, run.initial, run.vis, cfg), cfg.planner.t_h,
                              cfg.threads);
  sw.lap("recon");

  std::vector<ViewPoint> selected;
  for (auto id : run.plan.kept) selected.push_back(run.plan.views[id]);
  run.clusters = cluster(selected, cfg.cluster);
  FlightParams fp = cfg.flight;
  if (cfg.launch_auto) {
    const Aabb b = mesh.bounds();
    fp.launch = Vec3(b.min.x(), b.min.y(), zp.ground_floor);
  }
  run.flight.params = fp;
  for (std::size_t c = 0; c < run.clusters.size(); ++c) {
    std::vector<ViewPoint> members;
    for (auto i : run.clusters[c]) members.push_back(selected[i]);
    const Tour tour = solve_tour(members, fp.launch, cfg.ga_seed + c, cfg.ga);
    std::vector<ViewPoint> ordered;
    for (auto i : tour.order) ordered.push_back(members[i]);
    auto sorties = split_and_interpolate(ordered, fp, run.zone, c);
    for (auto& s : sorties) run.flight.sorties.push_back(std::move(s));
  }
  sw.lap("trajectory");
  return run;
}

void write_plan_artifacts(const PlanRun& run, const RunConfig& cfg, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_plan_json(dir / "plan.json", run.plan);
  std::vector<ViewPoint> selected;
  for (auto id : run.plan.kept) selected.push_back(run.plan.views[id]);
  write_viewpoints_json(dir / "viewpoints.json", selected);
  write_viewpoints_ply(dir / "viewpoints.ply", selected);
  write_samples_ply(dir / "samples.ply", run.samples);
  save_point_cloud_ply(dir / "safe_zone.ply", run.zone.forbidden_centers());
  write_flight_plan_json(dir / "flight_plan.json", run.flight);
  write_flight_plan_csv(dir / "flight_plan.csv", run.flight);
  write_flight_plan_ply(dir / "flight_plan.ply", run.flight);
  write_recon_csv(dir / "recon.csv", run.report);
  write_histogram_csv(dir / "levels.csv", run.report);
  write_recon_ply(dir / "recon.ply", run.samples, run.report);

  double length = 0, time = 0;
  for (const auto& s : run.flight.sorties) {
    length += s.length;
    time += s.time;
  }
  const auto& p = run.plan;
  json summary = {
      {"schema", "ovp.summary"},
      {"version", 1},
      {"sampling",
       {{"disk_radius", run.sampling.disk_radius}, {"footprint", run.sampling.footprint},
        {"overlap", cfg.overlap}, {"seed", cfg.sampling_seed}, {"samples", run.samples.size()},
        {"facade_samples", std::count_if(run.samples.begin(), run.samples.end(), is_facade)}}},
      {"safe_zone",
       {{"forbidden_voxels", run.zone.forbidden_count()},
        {"interior_filled", run.zone.interior_filled()},
        {"max_forbidden_altitude", run.zone.max_forbidden_altitude()}}},
      {"views",
       {{"initial", p.initial_count}, {"dropped", p.dropped_count}, {"removed", p.removed_count},
        {"rollbacks", p.rollback_count}, {"substituted", p.substituted_count}, {"kept", p.kept.size()},
        {"infeasible_samples", p.infeasible_samples.size()}, {"visibility_nonzeros", run.vis.nonzeros()}}},
      {"flight",
       {{"clusters", run.clusters.size()}, {"sorties", run.flight.sorties.size()},
        {"view_point_images", run.flight.view_point_images()},
        {"interpolated_images", run.flight.interpolated_images()}, {"length_m", length}, {"time_s", time}}},
      {"levels", histogram_json(run.report)},
      {"facade_mean_h", facade_mean_h(run.samples, run.report.h)},
      {"sample_h", run.report.h},
  };
  write_json(dir / "summary.json", summary);

  // Wall-clock numbers vary run to run, so they stay out of the JSON files.
  std::ofstream t(dir / "timings.txt");
  if (!t) throw IoError("cannot write timings");
  for (const auto& [stage, sec] : run.timings) t << stage << ' ' << format_double(sec) << '\n';
}

EvalRun run_evaluate(const TriMesh& mesh, std::vector<ViewPoint> views, const RunConfig& cfg) {
  EvalRun run;
  run.samples = sample_scene(mesh, cfg);
  run.views = std::move(views);
  const Bvh bvh(mesh);
  const VisibilityMatrix vis = build_matrix(run.samples, run.views, cfg.camera, bvh, cfg.threads);
  std::vector<std::uint32_t> all(run.views.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::uint32_t>(i);
  run.report = evaluate_views(all, context(run.samples, run.views, vis, cfg), cfg.planner.t_h, cfg.threads);
  run.facade_mean = facade_mean_h(run.samples, run.report.h);
  return run;
}

void write_eval_artifacts(const EvalRun& run, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_recon_csv(dir / "recon.csv", run.report);
  write_histogram_csv(dir / "levels.csv", run.report);
  write_recon_ply(dir / "recon.ply", run.samples, run.report);
  write_json(dir / "evaluation.json", {{"schema", "ovp.evaluation"},
                                       {"version", 1},
                                       {"views", run.views.size()},
                                       {"samples", run.samples.size()},
                                       {"levels", histogram_json(run.report)},
                                       {"facade_mean_h", run.facade_mean}});
}

std::vector<ViewPoint> run_baseline(const TriMesh& mesh, const RunConfig& cfg) {
  ObliqueConfig oc = cfg.baseline;
  oc.camera = cfg.camera;
  return plan_oblique(mesh.bounds(), oc);
}

}  // namespace ovp
