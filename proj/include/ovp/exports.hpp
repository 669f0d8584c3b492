#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "ovp/planner.hpp"
#include "ovp/recon.hpp"
#include "ovp/trajectory.hpp"

// File formats shared by the CLI subcommands. All JSON output goes through
// nlohmann::json, whose number formatting is shortest round-trip, so equal
// inputs give byte-identical files.

namespace ovp {

inline constexpr const char* kViewpointSchema = "ovp.viewpoints";
inline constexpr const char* kPlanSchema = "ovp.plan";
inline constexpr const char* kFlightPlanSchema = "ovp.flight_plan";
inline constexpr int kSchemaVersion = 1;

void write_viewpoints_json(const std::filesystem::path& path, std::span<const ViewPoint> views);
void write_plan_json(const std::filesystem::path& path, const PlanResult& plan);

// Reads the "viewpoints" array of a viewpoints or plan document and keeps the
// selected ones (state kept or replaced), in file order. Throws
// ValidationError on schema mismatch, IoError when unreadable.
std::vector<ViewPoint> read_selected_viewpoints(const std::filesystem::path& path);

void write_viewpoints_ply(const std::filesystem::path& path, std::span<const ViewPoint> views);
void write_samples_ply(const std::filesystem::path& path, std::span<const SurfaceSample> samples);

void write_flight_plan_json(const std::filesystem::path& path, const FlightPlan& plan);
// sortie,seq,x,y,z,yaw_deg,pitch_deg,trigger
void write_flight_plan_csv(const std::filesystem::path& path, const FlightPlan& plan);
void write_flight_plan_ply(const std::filesystem::path& path, const FlightPlan& plan);

// yaw from +x toward +y, pitch positive upward, degrees.
double yaw_deg(const Vec3& d);
double pitch_deg(const Vec3& d);

// sample_id,h,level
void write_recon_csv(const std::filesystem::path& path, const ReconReport& report);
// level,count,percent
void write_histogram_csv(const std::filesystem::path& path, const ReconReport& report);
void write_recon_ply(const std::filesystem::path& path, std::span<const SurfaceSample> samples,
                     const ReconReport& report);

// Parses the sample_id,h,level file back.
std::vector<double> read_recon_csv_h(const std::filesystem::path& path);

}  // namespace ovp
