#include "ovp/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ovp {

using nlohmann::json;

namespace {

// Typed access to one JSON object that remembers which keys were read, so
// leftover (misspelled) keys can be rejected.
class Section {
 public:
  Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) throw ValidationError("'" + name_ + "' must be an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  const json& raw(const char* key) {
    seen_.insert(key);
    return j_.at(key);
  }

  void number(const char* key, double& out) {
    if (!has(key)) return;
    const json& v = raw(key);
    if (!v.is_number()) throw ValidationError(where(key) + " must be a number");
    out = v.get<double>();
  }

  void degrees(const char* key, double& out_radians) {
    if (!has(key)) return;
    double deg = 0;
    number(key, deg);
    out_radians = deg_to_rad(deg);
  }

  template <class T>
  void integer(const char* key, T& out) {
    if (!has(key)) return;
    const json& v = raw(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      throw ValidationError(where(key) + " must be a non-negative integer");
    }
    out = static_cast<T>(v.get<std::uint64_t>());
  }

  void string(const char* key, std::string& out) {
    if (!has(key)) return;
    const json& v = raw(key);
    if (!v.is_string()) throw ValidationError(where(key) + " must be a string");
    out = v.get<std::string>();
  }

  void vec3(const char* key, Vec3& out) {
    if (!has(key)) return;
    const json& v = raw(key);
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number()) {
      throw ValidationError(where(key) + " must be [x, y, z]");
    }
    out = {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
  }

  Section child(const char* key) { return Section(raw(key), name_ + "." + key); }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.count(k)) throw ValidationError("unknown key '" + name_ + "." + k + "'");
    }
  }

 private:
  std::string where(const char* key) const { return "'" + name_ + "." + key + "'"; }

  const json& j_;
  std::string name_;
  std::set<std::string> seen_;
};

json parse_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(what + " is not valid JSON: " + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_schema(Section& s, const json& doc, const char* schema) {
  if (!doc.contains("schema") || !doc["schema"].is_string() || doc["schema"] != schema) {
    throw ValidationError(std::string("expected schema '") + schema + "'");
  }
  s.raw("schema");
  if (!doc.contains("version") || !doc["version"].is_number_integer() || doc["version"] != 1) {
    throw ValidationError(std::string("unsupported version for schema '") + schema + "'");
  }
  s.raw("version");
}

Building parse_building(Section s) {
  Building b;
  s.string("name", b.name);
  if (!s.has("footprint")) throw ValidationError("building lacks a footprint");
  const json& f = s.raw("footprint");
  if (!f.is_array() || f.size() != 4) throw ValidationError("footprint must be [x0, y0, x1, y1]");
  for (const auto& c : f) {
    if (!c.is_number()) throw ValidationError("footprint must be [x0, y0, x1, y1]");
  }
  b.footprint = {f[0].get<double>(), f[1].get<double>(), f[2].get<double>(), f[3].get<double>()};
  s.number("height", b.height);
  s.finish();
  return b;
}

SceneSpec parse_spec_object(const json& doc, bool require_schema) {
  Section s(doc, "scene");
  if (require_schema || doc.contains("schema")) check_schema(s, doc, kSceneSchema);
  SceneSpec spec;
  spec.buildings.clear();
  s.number("width", spec.width);
  s.number("depth", spec.depth);
  s.integer("seed", spec.seed);
  if (s.has("buildings")) {
    const json& arr = s.raw("buildings");
    if (!arr.is_array()) throw ValidationError("'scene.buildings' must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      Building b = parse_building(Section(arr[i], "scene.buildings[" + std::to_string(i) + "]"));
      if (b.name.empty()) b.name = "building_" + std::to_string(i);
      spec.buildings.push_back(b);
    }
  }
  if (s.has("tower")) {
    Building t = parse_building(s.child("tower"));
    if (t.name.empty()) t.name = "tower";
    spec.tower = t;
  }
  if (s.has("random")) {
    Section r = s.child("random");
    r.integer("count", spec.random.count);
    r.number("min_size", spec.random.min_size);
    r.number("max_size", spec.random.max_size);
    r.number("min_height", spec.random.min_height);
    r.number("max_height", spec.random.max_height);
    r.number("gap", spec.random.gap);
    r.finish();
  }
  s.finish();
  validate_scene_spec(spec);
  return spec;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative()) path = base / path;
  if (!std::filesystem::exists(path)) throw IoError("referenced file '" + path.string() + "' does not exist");
  return path;
}

}  // namespace

SceneSpec parse_scene_spec(const std::string& text) { return parse_spec_object(parse_text(text, "scene spec"), true); }

SceneSpec load_scene_spec(const std::filesystem::path& path) { return parse_scene_spec(read_file(path)); }

std::string scene_spec_to_json(const SceneSpec& spec) {
  auto building = [](const Building& b) {
    return json{{"name", b.name},
                {"footprint", {b.footprint.x0, b.footprint.y0, b.footprint.x1, b.footprint.y1}},
                {"height", b.height}};
  };
  json doc = {{"schema", kSceneSchema}, {"version", 1}, {"width", spec.width}, {"depth", spec.depth},
              {"seed", spec.seed}};
  json arr = json::array();
  for (const auto& b : spec.buildings) arr.push_back(building(b));
  doc["buildings"] = arr;
  if (spec.tower) doc["tower"] = building(*spec.tower);
  if (spec.random.count > 0) {
    const auto& r = spec.random;
    doc["random"] = {{"count", r.count},           {"min_size", r.min_size},     {"max_size", r.max_size},
                     {"min_height", r.min_height}, {"max_height", r.max_height}, {"gap", r.gap}};
  }
  return doc.dump(1) + "\n";
}

void RunConfig::validate() const {
  if (scene.mesh.has_value() == scene.spec.has_value()) {
    throw ValidationError("config must name exactly one of scene.mesh, scene.spec_file, scene.spec");
  }
  if (scene.spec) validate_scene_spec(*scene.spec);
  camera.validate();
  if (!(overlap >= 0 && overlap < 1)) throw ValidationError("sampling.overlap must lie in [0, 1)");
  if (!(poisson.candidate_density > 0)) throw ValidationError("sampling.candidate_density must be positive");
  if (!(poisson.curvature_weight >= 0)) throw ValidationError("sampling.curvature_weight must be non-negative");
  if (!(safe_zone.margin > 0)) throw ValidationError("safe_zone.margin must be positive");
  if (!(safe_zone.cell > 0) || safe_zone.cell > safe_zone.margin / 2) {
    throw ValidationError("safe_zone.cell must be positive and at most margin / 2");
  }
  if (!(safe_zone.ground_floor >= 0)) throw ValidationError("safe_zone.ground_floor must be non-negative");
  planner.validate();
  weights.validate();
  cluster.validate();
  flight.validate();
  ga.validate();
  (void)oblique_grid(Aabb{Vec3::Zero(), Vec3(1, 1, 0)}, baseline);
}

void RunConfig::override_seed(std::uint64_t s) {
  seed = s;
  sampling_seed = s;
  ga_seed = s;
}

RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir) {
  const json doc = parse_text(text, "config");
  Section root(doc, "config");
  check_schema(root, doc, kConfigSchema);

  RunConfig cfg;
  root.integer("seed", cfg.seed);
  cfg.sampling_seed = cfg.seed;
  cfg.ga_seed = cfg.seed;
  root.integer("threads", cfg.threads);
  if (root.has("output")) {
    std::string out;
    root.string("output", out);
    std::filesystem::path p(out);
    cfg.output = p.is_relative() ? base_dir / p : p;
  }

  if (!root.has("scene")) throw ValidationError("config lacks a scene section");
  {
    Section s = root.child("scene");
    const int sources = s.has("mesh") + s.has("spec_file") + s.has("spec");
    if (sources != 1) throw ValidationError("scene must have exactly one of mesh, spec_file, spec");
    if (s.has("mesh")) {
      std::string m;
      s.string("mesh", m);
      cfg.scene.mesh = resolve(base_dir, m);
    }
    if (s.has("spec_file")) {
      std::string f;
      s.string("spec_file", f);
      cfg.scene.spec = load_scene_spec(resolve(base_dir, f));
    }
    if (s.has("spec")) {
      cfg.scene.spec = parse_spec_object(s.raw("spec"), false);
    }
    s.finish();
  }

  if (root.has("camera")) {
    Section s = root.child("camera");
    s.degrees("fov_deg", cfg.camera.fov);
    s.number("view_distance", cfg.camera.view_distance);
    const bool range_set = s.has("max_range");
    s.number("max_range", cfg.camera.max_range);
    if (!range_set) cfg.camera.max_range = 2.0 * cfg.camera.view_distance;
    s.degrees("max_incidence_deg", cfg.camera.max_incidence);
    s.finish();
  }
  if (root.has("sampling")) {
    Section s = root.child("sampling");
    s.number("overlap", cfg.overlap);
    s.integer("seed", cfg.sampling_seed);
    s.number("candidate_density", cfg.poisson.candidate_density);
    s.number("curvature_weight", cfg.poisson.curvature_weight);
    s.finish();
  }
  if (root.has("safe_zone")) {
    Section s = root.child("safe_zone");
    s.number("margin", cfg.safe_zone.margin);
    s.number("cell", cfg.safe_zone.cell);
    s.number("ground_floor", cfg.safe_zone.ground_floor);
    s.integer("max_voxels", cfg.safe_zone.max_voxels);
    s.finish();
  }
  if (root.has("planner")) {
    Section s = root.child("planner");
    s.number("t_h", cfg.planner.t_h);
    s.degrees("rotation_step_deg", cfg.planner.rotation_step);
    if (s.has("neighbor_radius")) {
      s.number("neighbor_radius", cfg.planner.neighbor_radius);
      cfg.neighbor_radius_auto = false;
    }
    s.degrees("neighbor_angle_deg", cfg.planner.neighbor_angle);
    s.integer("max_substitution_rounds", cfg.planner.max_substitution_rounds);
    s.finish();
  }
  if (root.has("recon")) {
    Section s = root.child("recon");
    s.number("k1", cfg.weights.k1);
    s.degrees("alpha1_deg", cfg.weights.alpha1);
    s.number("k3", cfg.weights.k3);
    s.degrees("alpha3_deg", cfg.weights.alpha3);
    if (s.has("d_max")) {
      s.number("d_max", cfg.weights.d_max);
      cfg.d_max_auto = false;
    }
    s.finish();
  }
  if (cfg.d_max_auto) cfg.weights.d_max = 2.0 * cfg.camera.view_distance;
  if (root.has("cluster")) {
    Section s = root.child("cluster");
    if (s.has("strategy")) {
      std::string st;
      s.string("strategy", st);
      cfg.cluster.strategy = cluster_strategy_from_string(st);
    }
    s.integer("capacity", cfg.cluster.capacity);
    s.integer("direction_bins", cfg.cluster.direction_bins);
    s.number("height_band", cfg.cluster.height_band);
    s.integer("lloyd_iterations", cfg.cluster.lloyd_iterations);
    s.finish();
  }
  if (root.has("flight")) {
    Section s = root.child("flight");
    s.number("speed", cfg.flight.speed);
    s.number("trigger_interval", cfg.flight.trigger_interval);
    s.number("endurance", cfg.flight.endurance);
    s.number("hover", cfg.flight.hover);
    if (s.has("launch")) {
      s.vec3("launch", cfg.flight.launch);
      cfg.launch_auto = false;
    }
    s.finish();
  }
  if (root.has("ga")) {
    Section s = root.child("ga");
    s.integer("population", cfg.ga.population);
    s.integer("generations", cfg.ga.generations);
    s.integer("tournament", cfg.ga.tournament);
    s.number("mutation", cfg.ga.mutation);
    s.integer("elites", cfg.ga.elites);
    s.integer("seed", cfg.ga_seed);
    s.finish();
  }
  if (root.has("baseline")) {
    Section s = root.child("baseline");
    s.number("height", cfg.baseline.height);
    s.number("forward_overlap", cfg.baseline.forward_overlap);
    s.number("side_overlap", cfg.baseline.side_overlap);
    s.degrees("tilt_deg", cfg.baseline.tilt);
    s.finish();
  }
  root.finish();
  cfg.baseline.camera = cfg.camera;
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  return parse_run_config(text, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

}  // namespace ovp
