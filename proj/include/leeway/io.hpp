#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "leeway/augment.hpp"
#include "leeway/coverage.hpp"
#include "leeway/displacement.hpp"
#include "leeway/forcefield.hpp"
#include "leeway/geo.hpp"
#include "leeway/sensors.hpp"
#include "leeway/vessel.hpp"

namespace leeway::io {

// ---------------------------------------------------------------------------
// mission files (structured JSON text)

struct MissionFile {
  Frame frame;
  std::vector<Mission> robots;
  std::string pattern;                 // metadata, may be empty
  double spacing = 0.0;                // metadata
  std::vector<std::string> warnings;   // metadata
};

MissionFile load_missions(const std::filesystem::path& path);
void save_missions(const std::filesystem::path& path, const MissionFile& file);

MissionFile from_plan(const CoveragePlan& plan, const Frame& frame,
                      double acceptance_radius = 3.0);

// ---------------------------------------------------------------------------
// displacement model files

DisplacementModel load_model(const std::filesystem::path& path);
void save_model(const std::filesystem::path& path, const DisplacementModel& m);

// ---------------------------------------------------------------------------
// GP force-map files (training data + hyperparameters; refit on load)

std::shared_ptr<GpForceMap> load_force_map(const std::filesystem::path& path);
void save_force_map(const std::filesystem::path& path, const GpForceMap& map);

/// Rectangular posterior raster `x_m,y_m,vx_mps,vy_mps,varx,vary`, rows in
/// y-major order. Bounds default to the training bounding box padded 10%.
void write_grid_csv(const std::filesystem::path& path, const GpForceMap& map,
                    int cells_per_axis = 40);

// ---------------------------------------------------------------------------
// region files (lake polygon or river corridor)

struct RegionFile {
  std::optional<LakeRegion> lake;
  std::optional<RiverCorridor> river;
  Frame frame;
};

RegionFile load_region(const std::filesystem::path& path);
void save_region(const std::filesystem::path& path, const RegionFile& region);

// ---------------------------------------------------------------------------
// run configuration

struct FieldSpec {
  enum class Kind { zero, uniform, shear, vortex, gp };
  Kind kind = Kind::zero;
  Vec2 vector;                  // uniform
  Axis axis = Axis::x;          // shear
  double rate = 0.0;            // shear
  Vec2 base;                    // shear
  LocalPoint center;            // vortex
  double strength = 0.0;        // vortex
  std::string map_path;         // gp
};

struct RunConfig {
  VesselParams vessel;
  PidGains gains;
  AugmentConfig augment;
  std::string augment_wind_map;     // required when augment.source == gp_maps
  std::string augment_current_map;
  FieldSpec wind;
  FieldSpec current;
  double dt = 0.1;
  std::uint64_t seed = 1;
  Pose start;  // heading stored as compass degrees in the file
};

RunConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const RunConfig& config);

/// Instantiate a field spec; GP maps are loaded from disk relative to
/// `base_dir` when the path is not absolute.
std::unique_ptr<ForceField> make_field(const FieldSpec& spec,
                                       const std::filesystem::path& base_dir);

// ---------------------------------------------------------------------------
// trajectory logs (CSV, schema pinned; one trailing '# meta' comment line
// carries completion flags and the mission hash)

inline constexpr const char* kTrajectoryHeader =
    "t_s,x_m,y_m,heading_deg_compass,water_speed_mps,gvx_mps,gvy_mps,"
    "wp_index,target_x_m,target_y_m,intermediate_x_m,intermediate_y_m,"
    "wind_vx,wind_vy,cur_vx,cur_vy";

void save_trajectory(const std::filesystem::path& path, const TrajectoryLog& log);
TrajectoryLog load_trajectory(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// sensor survey logs (CSV)

inline constexpr const char* kSensorHeader =
    "t_s,lat_deg,lon_deg,heading_deg_compass,sog_mps,wind_speed_mps,"
    "wind_bearing_rel_deg,water_speed_mps,water_bearing_rel_deg";

struct SensorLog {
  struct Row {
    double t = 0.0;
    Pose pose;       // local frame anchored at the first row
    double sog = 0;  // m/s speed over ground
  };
  Frame frame;                          // origin = first row's position
  std::vector<Row> track;
  std::vector<RelativeReading> readings;  // wind and current per row
  int skipped_rows = 0;
};

/// Parses the pinned sensor schema. Rows with non-finite fields are skipped
/// (counted); more than 10% skipped or a malformed header is a parse error.
SensorLog load_sensor_log(const std::filesystem::path& path);
void save_sensor_log(const std::filesystem::path& path, const SensorLog& log);

/// Convert a survey log into world-frame force samples for GP fitting.
/// Ground velocity is taken as sog along the recorded heading.
std::vector<ForceSample> sensor_samples(const SensorLog& log, SourceKind source);

// ---------------------------------------------------------------------------
// displacement training sets (CSV `f_along,f_cross,v_cmd,e_along,e_cross`)

void save_training_set(const std::filesystem::path& path,
                       const std::vector<DisplacementSample>& samples);
std::vector<DisplacementSample> load_training_set(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// GeoJSON export (plot convenience, not a canonical format)

void write_geojson(const std::filesystem::path& path, const Frame& frame,
                   const Mission& mission, const TrajectoryLog& log);

/// Stable formatting for every numeric field this module writes; identical
/// inputs must serialize byte-identically.
std::string format_double(double v);

}  // namespace leeway::io
