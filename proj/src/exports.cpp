#include "ovp/exports.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ovp/format.hpp"
#include "ovp/mesh_io.hpp"

namespace ovp {

using nlohmann::json;

namespace {

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 json_vec(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() || !j[2].is_number()) {
    throw ValidationError(std::string("expected a 3-vector for '") + what + "'");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json viewpoint_json(const ViewPoint& v) {
  return {{"id", v.id}, {"position", vec_json(v.position)}, {"direction", vec_json(v.direction)},
          {"state", to_string(v.state)}};
}

void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << doc.dump(1) << '\n';
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

void write_viewpoints_json(const std::filesystem::path& path, std::span<const ViewPoint> views) {
  json arr = json::array();
  for (const auto& v : views) arr.push_back(viewpoint_json(v));
  write_json(path, {{"schema", kViewpointSchema}, {"version", kSchemaVersion}, {"viewpoints", arr}});
}

void write_plan_json(const std::filesystem::path& path, const PlanResult& plan) {
  json views = json::array();
  for (const auto& v : plan.views) views.push_back(viewpoint_json(v));
  json audit = json::array();
  for (const auto& e : plan.audit) {
    json entry = {{"kind", to_string(e.kind)}, {"view", e.view}};
    if (e.kind == AuditEntry::Kind::substitute) entry["replacement"] = e.replacement;
    // Redundancy of a view that sees nothing is infinite; JSON has no inf.
    entry["value"] = std::isfinite(e.value) ? json(e.value) : json("inf");
    audit.push_back(entry);
  }
  const json counts = {{"initial", plan.initial_count},     {"dropped", plan.dropped_count},
                       {"removed", plan.removed_count},     {"rollbacks", plan.rollback_count},
                       {"substituted", plan.substituted_count}, {"kept", plan.kept.size()},
                       {"infeasible_samples", plan.infeasible_samples.size()}};
  write_json(path, {{"schema", kPlanSchema},
                    {"version", kSchemaVersion},
                    {"counts", counts},
                    {"kept", plan.kept},
                    {"infeasible_samples", plan.infeasible_samples},
                    {"viewpoints", views},
                    {"audit", audit}});
}

std::vector<ViewPoint> read_selected_viewpoints(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open viewpoints file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("viewpoints file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object() || !doc.contains("schema") || !doc["schema"].is_string()) {
    throw ValidationError("viewpoints file lacks a schema field");
  }
  const std::string schema = doc["schema"];
  if (schema != kViewpointSchema && schema != kPlanSchema) {
    throw ValidationError("unexpected schema '" + schema + "' in '" + path.string() + "'");
  }
  if (!doc.contains("version") || doc["version"] != kSchemaVersion) {
    throw ValidationError("unsupported schema version in '" + path.string() + "'");
  }
  if (!doc.contains("viewpoints") || !doc["viewpoints"].is_array()) {
    throw ValidationError("viewpoints file lacks a viewpoints array");
  }
  std::vector<ViewPoint> out;
  for (const auto& j : doc["viewpoints"]) {
    if (!j.is_object() || !j.contains("position") || !j.contains("direction") || !j.contains("state") ||
        !j.contains("id")) {
      throw ValidationError("viewpoint record lacks id/position/direction/state");
    }
    ViewPoint v;
    v.id = j["id"].get<std::uint32_t>();
    v.position = json_vec(j["position"], "position");
    v.direction = json_vec(j["direction"], "direction");
    if (std::abs(v.direction.norm() - 1.0) > 1e-6) throw ValidationError("viewpoint direction is not unit length");
    v.state = view_state_from_string(j["state"].get<std::string>());
    if (v.state == ViewState::kept || v.state == ViewState::replaced) out.push_back(v);
  }
  return out;
}

void write_viewpoints_ply(const std::filesystem::path& path, std::span<const ViewPoint> views) {
  std::vector<Vec3> pts, dirs;
  for (const auto& v : views) {
    pts.push_back(v.position);
    dirs.push_back(v.direction);
  }
  save_point_cloud_ply(path, pts, dirs);
}

void write_samples_ply(const std::filesystem::path& path, std::span<const SurfaceSample> samples) {
  std::vector<Vec3> pts, nrm;
  for (const auto& s : samples) {
    pts.push_back(s.position);
    nrm.push_back(s.normal);
  }
  save_point_cloud_ply(path, pts, nrm);
}

double yaw_deg(const Vec3& d) { return rad_to_deg(std::atan2(d.y(), d.x())); }
double pitch_deg(const Vec3& d) { return rad_to_deg(std::asin(std::clamp(d.z(), -1.0, 1.0))); }

void write_flight_plan_json(const std::filesystem::path& path, const FlightPlan& plan) {
  json sorties = json::array();
  for (std::size_t i = 0; i < plan.sorties.size(); ++i) {
    const auto& s = plan.sorties[i];
    json wps = json::array();
    for (const auto& w : s.waypoints) {
      json wj = {{"position", vec_json(w.position)},
                 {"direction", vec_json(w.direction)},
                 {"trigger", w.trigger},
                 {"kind", w.kind == WaypointKind::view_point ? "view_point" : "interpolated"}};
      if (w.view_id >= 0) wj["view_id"] = w.view_id;
      wps.push_back(wj);
    }
    sorties.push_back({{"index", i},
                       {"cluster", s.cluster},
                       {"length_m", s.length},
                       {"time_s", s.time},
                       {"view_point_images", s.view_point_images},
                       {"interpolated_images", s.interpolated_images},
                       {"waypoints", wps}});
  }
  const auto& p = plan.params;
  write_json(path, {{"schema", kFlightPlanSchema},
                    {"version", kSchemaVersion},
                    {"params",
                     {{"speed_mps", p.speed},
                      {"trigger_interval_s", p.trigger_interval},
                      {"endurance_s", p.endurance},
                      {"hover_s", p.hover},
                      {"launch", vec_json(p.launch)}}},
                    {"view_point_images", plan.view_point_images()},
                    {"interpolated_images", plan.interpolated_images()},
                    {"sorties", sorties}});
}

void write_flight_plan_csv(const std::filesystem::path& path, const FlightPlan& plan) {
  auto out = open_out(path);
  out << "sortie,seq,x,y,z,yaw_deg,pitch_deg,trigger\n";
  for (std::size_t i = 0; i < plan.sorties.size(); ++i) {
    const auto& wps = plan.sorties[i].waypoints;
    for (std::size_t k = 0; k < wps.size(); ++k) {
      const auto& w = wps[k];
      out << i << ',' << k << ',' << format_double(w.position.x()) << ',' << format_double(w.position.y()) << ','
          << format_double(w.position.z()) << ',' << format_double(yaw_deg(w.direction)) << ','
          << format_double(pitch_deg(w.direction)) << ',' << (w.trigger ? 1 : 0) << '\n';
    }
  }
}

void write_flight_plan_ply(const std::filesystem::path& path, const FlightPlan& plan) {
  std::vector<Vec3> pts, dirs;
  std::vector<Rgb> colors;
  for (const auto& s : plan.sorties) {
    for (const auto& w : s.waypoints) {
      pts.push_back(w.position);
      dirs.push_back(w.direction);
      colors.push_back(w.kind == WaypointKind::view_point ? Rgb{255, 0, 0}
                                                          : (w.trigger ? Rgb{0, 160, 255} : Rgb{160, 160, 160}));
    }
  }
  save_point_cloud_ply(path, pts, dirs, colors);
}

void write_recon_csv(const std::filesystem::path& path, const ReconReport& report) {
  auto out = open_out(path);
  out << "sample_id,h,level\n";
  for (std::size_t s = 0; s < report.h.size(); ++s) {
    out << s << ',' << format_double(report.h[s]) << ',' << report.level[s] << '\n';
  }
}

void write_histogram_csv(const std::filesystem::path& path, const ReconReport& report) {
  static const char* names[kLevelCount] = {"I", "II", "III", "IV", "V", "VI"};
  auto out = open_out(path);
  out << "level,count,percent\n";
  for (int l = 0; l < kLevelCount; ++l) {
    out << names[l] << ',' << report.counts[l] << ',' << format_double(report.percent[l]) << '\n';
  }
}

void write_recon_ply(const std::filesystem::path& path, std::span<const SurfaceSample> samples,
                     const ReconReport& report) {
  std::vector<Vec3> pts, nrm;
  std::vector<Rgb> colors;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    pts.push_back(samples[s].position);
    nrm.push_back(samples[s].normal);
    colors.push_back(level_color(report.level[s]));
  }
  save_point_cloud_ply(path, pts, nrm, colors);
}

std::vector<double> read_recon_csv_h(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  std::getline(in, line);
  std::vector<double> h;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string id, hv;
    std::getline(ls, id, ',');
    std::getline(ls, hv, ',');
    h.push_back(std::stod(hv));
  }
  return h;
}

}  // namespace ovp
