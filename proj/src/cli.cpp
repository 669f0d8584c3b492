#include "ovp/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ovp/exports.hpp"
#include "ovp/mesh_io.hpp"
#include "ovp/pipeline.hpp"

namespace ovp {

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string viewpoints;
  std::string mesh;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
};

RunConfig load_config(const Options& o) {
  RunConfig cfg = load_run_config(o.config);
  if (o.threads) cfg.threads = *o.threads;
  if (o.seed) cfg.override_seed(*o.seed);
  if (!o.mesh.empty()) {
    if (!std::filesystem::exists(o.mesh)) throw IoError("mesh '" + o.mesh + "' does not exist");
    cfg.scene.mesh = o.mesh;
    cfg.scene.spec.reset();
  }
  return cfg;
}

std::filesystem::path out_dir(const Options& o, const RunConfig& cfg) {
  if (!o.out.empty()) return o.out;
  if (cfg.output) return *cfg.output;
  throw ValidationError("no output directory: pass --out or set 'output' in the config");
}

// A synth input is either a scene spec document or a run config whose
// scene is a spec.
SceneSpec synth_spec(const Options& o) {
  std::ifstream in(o.config);
  if (!in) throw IoError("cannot open '" + o.config + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_object() && doc.contains("schema") && doc["schema"] == kConfigSchema) {
    const RunConfig cfg = load_config(o);
    if (!cfg.scene.spec) throw ValidationError("config scene is a mesh, not a spec");
    return *cfg.scene.spec;
  }
  return parse_scene_spec(text);
}

void cmd_synth(const Options& o) {
  const SceneSpec spec = synth_spec(o);
  std::filesystem::path out = o.out.empty() ? std::filesystem::path("scene.obj") : std::filesystem::path(o.out);
  const auto ext = out.extension();
  if (ext != ".obj" && ext != ".ply") out /= "scene.obj";
  if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
  const TriMesh mesh = generate_scene(spec);
  if (out.extension() == ".ply") {
    save_ply(mesh, out);
  } else {
    save_obj(mesh, out);
  }
  std::cout << "wrote " << out.string() << " (" << mesh.triangles().size() << " triangles)\n";
}

void cmd_plan(const Options& o) {
  const RunConfig cfg = load_config(o);
  const auto dir = out_dir(o, cfg);
  const PlanRun run = run_plan(cfg);
  write_plan_artifacts(run, cfg, dir);
  std::cout << "samples " << run.samples.size() << ", initial views " << run.plan.initial_count << ", kept "
            << run.plan.kept.size() << ", sorties " << run.flight.sorties.size() << ", level I "
            << run.report.percent[0] << "%\n";
}

void cmd_baseline(const Options& o) {
  const RunConfig cfg = load_config(o);
  const auto dir = out_dir(o, cfg);
  const auto mesh = load_scene_mesh(cfg);
  const auto views = run_baseline(*mesh, cfg);
  std::filesystem::create_directories(dir);
  write_viewpoints_json(dir / "viewpoints.json", views);
  write_viewpoints_ply(dir / "viewpoints.ply", views);
  std::cout << "oblique views " << views.size() << "\n";
}

void cmd_evaluate(const Options& o) {
  const RunConfig cfg = load_config(o);
  const auto dir = out_dir(o, cfg);
  if (o.viewpoints.empty()) throw ValidationError("evaluate needs --viewpoints");
  auto views = read_selected_viewpoints(o.viewpoints);
  const auto mesh = load_scene_mesh(cfg);
  const EvalRun run = run_evaluate(*mesh, std::move(views), cfg);
  write_eval_artifacts(run, dir);
  std::cout << "views " << run.views.size() << ", samples " << run.samples.size() << ", level I "
            << run.report.percent[0] << "%, facade mean h " << run.facade_mean << "\n";
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Optimized-view UAV photogrammetry planner"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool with_run_flags) {
    sub->add_option("--config", o.config, "config or scene spec JSON")->required();
    sub->add_option("--out", o.out, "output directory (synth: mesh file)");
    if (with_run_flags) {
      sub->add_option("--threads", o.threads, "worker threads (0 = hardware)");
      sub->add_option("--seed", o.seed, "overrides every config seed");
      sub->add_option("--mesh", o.mesh, "proxy mesh overriding the config scene");
    }
  };
  auto* synth = app.add_subcommand("synth", "generate a box-city mesh from a scene spec");
  common(synth, false);
  auto* plan = app.add_subcommand("plan", "run the optimized-view pipeline");
  common(plan, true);
  auto* baseline = app.add_subcommand("baseline", "write an oblique grid plan");
  common(baseline, true);
  auto* evaluate = app.add_subcommand("evaluate", "score a viewpoint file");
  common(evaluate, true);
  evaluate->add_option("--viewpoints", o.viewpoints, "viewpoints or plan JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*synth) cmd_synth(o);
    if (*plan) cmd_plan(o);
    if (*baseline) cmd_baseline(o);
    if (*evaluate) cmd_evaluate(o);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return 2;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace ovp
