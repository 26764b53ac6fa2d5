#include "leeway/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "leeway/error.hpp"
#include "leeway/log.hpp"

namespace leeway::io {

using nlohmann::json;

namespace {

json load_json(const std::filesystem::path& path, const char* format_tag) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (format_tag && j.value("format", "") != format_tag)
    throw ParseError(path.string() + ": expected format tag '" +
                     std::string(format_tag) + "'");
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  out << text;
}

double get_num(const json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw ParseError(ctx + ": missing numeric field '" + key + "'");
  return j.at(key).get<double>();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_num(const std::string& s, int line_no, const char* col) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) + ": field '" +
                     std::string(col) + "' is not a number: '" + s + "'");
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// mission files

namespace {

json waypoint_to_json(const Waypoint& wp) {
  return {{"x_m", wp.position.x}, {"y_m", wp.position.y}, {"speed_mps", wp.speed}};
}

}  // namespace

void save_missions(const std::filesystem::path& path, const MissionFile& file) {
  json robots = json::array();
  for (const auto& m : file.robots) {
    json wps = json::array();
    for (const auto& wp : m.waypoints) wps.push_back(waypoint_to_json(wp));
    robots.push_back({{"waypoints", wps}});
  }
  json j = {
      {"format", "leeway-mission-v1"},
      {"frame",
       {{"origin_lat", file.frame.origin.lat}, {"origin_lon", file.frame.origin.lon}}},
      {"acceptance_radius_m",
       file.robots.empty() ? 3.0 : file.robots.front().acceptance_radius},
      {"metadata",
       {{"pattern", file.pattern},
        {"spacing_m", file.spacing},
        {"warnings", file.warnings}}},
      {"robots", robots},
  };
  write_text(path, j.dump(2) + "\n");
}

MissionFile load_missions(const std::filesystem::path& path) {
  const json j = load_json(path, "leeway-mission-v1");
  MissionFile file;
  const auto& frame = j.at("frame");
  file.frame.origin = {get_num(frame, "origin_lat", "frame"),
                       get_num(frame, "origin_lon", "frame")};
  const double radius = j.value("acceptance_radius_m", 3.0);
  if (j.contains("metadata")) {
    const auto& md = j.at("metadata");
    file.pattern = md.value("pattern", "");
    file.spacing = md.value("spacing_m", 0.0);
    if (md.contains("warnings"))
      file.warnings = md.at("warnings").get<std::vector<std::string>>();
  }

  if (!j.contains("robots") || !j.at("robots").is_array() || j.at("robots").empty())
    throw ParseError(path.string() + ": needs a non-empty 'robots' array");
  for (const auto& robot : j.at("robots")) {
    Mission m;
    m.acceptance_radius = radius;
    if (!robot.contains("waypoints") || robot.at("waypoints").empty())
      throw ParseError(path.string() + ": robot without waypoints");
    bool any_geo = false, any_local = false;
    for (const auto& wp : robot.at("waypoints")) {
      Waypoint w;
      const bool geo = wp.contains("lat_deg") || wp.contains("lon_deg");
      const bool local = wp.contains("x_m") || wp.contains("y_m");
      if (geo && local)
        throw ParseError(path.string() +
                         ": waypoint mixes lat/lon and x/y coordinates");
      if (geo) {
        any_geo = true;
        w.position = to_local(file.frame, {get_num(wp, "lat_deg", "waypoint"),
                                           get_num(wp, "lon_deg", "waypoint")});
      } else if (local) {
        any_local = true;
        w.position = {get_num(wp, "x_m", "waypoint"), get_num(wp, "y_m", "waypoint")};
      } else {
        throw ParseError(path.string() + ": waypoint without coordinates");
      }
      w.speed = get_num(wp, "speed_mps", "waypoint");
      m.waypoints.push_back(w);
    }
    if (any_geo && any_local)
      throw ParseError(path.string() +
                       ": mission mixes lat/lon and x/y waypoints");
    file.robots.push_back(std::move(m));
  }
  return file;
}

MissionFile from_plan(const CoveragePlan& plan, const Frame& frame,
                      double acceptance_radius) {
  MissionFile file;
  file.frame = frame;
  file.pattern = pattern_name(plan.pattern);
  file.spacing = plan.lane_spacing;
  if (plan.k_reduced)
    file.warnings.push_back("requested robots exceeded lane count; reduced");
  file.robots = plan.missions(acceptance_radius);
  return file;
}

// ---------------------------------------------------------------------------
// displacement model files

void save_model(const std::filesystem::path& path, const DisplacementModel& m) {
  json weights = json::array();
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 4; ++c) weights.push_back(m.weights(r, c));
  const json j = {
      {"format", "leeway-displacement-v1"},
      {"feature_schema", kFeatureSchema},
      {"weights", weights},
      {"fit_residual_m", m.fit_residual},
  };
  write_text(path, j.dump(2) + "\n");
}

DisplacementModel load_model(const std::filesystem::path& path) {
  const json j = load_json(path, "leeway-displacement-v1");
  if (j.value("feature_schema", "") != kFeatureSchema)
    throw ParseError(path.string() + ": unsupported feature schema '" +
                     j.value("feature_schema", "") + "'");
  const auto& w = j.at("weights");
  if (!w.is_array() || w.size() != 8)
    throw ParseError(path.string() + ": expected 8 weights");
  DisplacementModel m;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 4; ++c)
      m.weights(r, c) = w.at(static_cast<std::size_t>(r * 4 + c)).get<double>();
  m.fit_residual = j.value("fit_residual_m", 0.0);
  return m;
}

// ---------------------------------------------------------------------------
// GP force-map files

void save_force_map(const std::filesystem::path& path, const GpForceMap& map) {
  json points = json::array(), vx = json::array(), vy = json::array();
  for (std::size_t i = 0; i < map.size(); ++i) {
    const auto& p = map.training_points()[i];
    points.push_back({p.x, p.y});
    const Vec2 t = map.training_target(i);
    vx.push_back(t.x);
    vy.push_back(t.y);
  }
  const auto& h = map.hyper();
  const json j = {
      {"format", "leeway-gpmap-v1"},
      {"source", source_name(map.source())},
      {"hyperparams",
       {{"signal_std", h.signal_std},
        {"length_scale", h.length_scale},
        {"noise_std", h.noise_std}}},
      {"points", points},
      {"targets_vx", vx},
      {"targets_vy", vy},
  };
  write_text(path, j.dump(2) + "\n");
}

std::shared_ptr<GpForceMap> load_force_map(const std::filesystem::path& path) {
  const json j = load_json(path, "leeway-gpmap-v1");
  GpHyperparams h;
  const auto& hj = j.at("hyperparams");
  h.signal_std = get_num(hj, "signal_std", "hyperparams");
  h.length_scale = get_num(hj, "length_scale", "hyperparams");
  h.noise_std = get_num(hj, "noise_std", "hyperparams");

  const auto& points = j.at("points");
  const auto& vx = j.at("targets_vx");
  const auto& vy = j.at("targets_vy");
  if (points.size() != vx.size() || points.size() != vy.size())
    throw ParseError(path.string() + ": points/targets length mismatch");
  const SourceKind src =
      j.value("source", "wind") == std::string("current") ? SourceKind::current
                                                          : SourceKind::wind;
  std::vector<ForceSample> samples;
  samples.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    ForceSample s;
    s.position = {points.at(i).at(0).get<double>(), points.at(i).at(1).get<double>()};
    s.vector = {vx.at(i).get<double>(), vy.at(i).get<double>()};
    s.source = src;
    samples.push_back(s);
  }
  return std::make_shared<GpForceMap>(GpForceMap::fit(samples, h));
}

void write_grid_csv(const std::filesystem::path& path, const GpForceMap& map,
                    int cells_per_axis) {
  Vec2 lo = map.training_points().front(), hi = lo;
  for (const auto& p : map.training_points()) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  const Vec2 pad = (hi - lo) * 0.1 + Vec2{1.0, 1.0};
  lo -= pad;
  hi += pad;

  std::vector<LocalPoint> grid;
  grid.reserve(static_cast<std::size_t>(cells_per_axis) *
               static_cast<std::size_t>(cells_per_axis));
  for (int iy = 0; iy < cells_per_axis; ++iy)
    for (int ix = 0; ix < cells_per_axis; ++ix)
      grid.push_back({lo.x + (hi.x - lo.x) * ix / (cells_per_axis - 1),
                      lo.y + (hi.y - lo.y) * iy / (cells_per_axis - 1)});

  const auto predictions = map.predict_batch(grid, Exec::parallel);

  std::string out = "x_m,y_m,vx_mps,vy_mps,varx,vary\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out += format_double(grid[i].x) + "," + format_double(grid[i].y) + "," +
           format_double(predictions[i].mean.x) + "," +
           format_double(predictions[i].mean.y) + "," +
           format_double(predictions[i].variance.x) + "," +
           format_double(predictions[i].variance.y) + "\n";
  }
  write_text(path, out);
}

// ---------------------------------------------------------------------------
// region files

void save_region(const std::filesystem::path& path, const RegionFile& region) {
  json j = {
      {"format", "leeway-region-v1"},
      {"frame",
       {{"origin_lat", region.frame.origin.lat},
        {"origin_lon", region.frame.origin.lon}}},
  };
  if (region.lake) {
    json boundary = json::array();
    for (const auto& p : region.lake->boundary) boundary.push_back({p.x, p.y});
    j["type"] = "lake";
    j["boundary"] = boundary;
  } else if (region.river) {
    json centerline = json::array();
    for (const auto& p : region.river->centerline) centerline.push_back({p.x, p.y});
    j["type"] = "river";
    j["centerline"] = centerline;
    j["width_m"] = region.river->width;
  } else {
    throw DomainError("save_region: region holds neither lake nor river");
  }
  write_text(path, j.dump(2) + "\n");
}

RegionFile load_region(const std::filesystem::path& path) {
  const json j = load_json(path, "leeway-region-v1");
  RegionFile region;
  if (j.contains("frame")) {
    const auto& frame = j.at("frame");
    region.frame.origin = {get_num(frame, "origin_lat", "frame"),
                           get_num(frame, "origin_lon", "frame")};
  }
  const std::string type = j.value("type", "");
  if (type == "lake") {
    LakeRegion lake;
    for (const auto& p : j.at("boundary"))
      lake.boundary.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    lake.validate();
    region.lake = std::move(lake);
  } else if (type == "river") {
    RiverCorridor river;
    for (const auto& p : j.at("centerline"))
      river.centerline.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    river.width = get_num(j, "width_m", "region");
    river.validate();
    region.river = std::move(river);
  } else {
    throw ParseError(path.string() + ": region type must be 'lake' or 'river'");
  }
  return region;
}

// ---------------------------------------------------------------------------
// run configuration

namespace {

FieldSpec field_from_json(const json& j, const std::string& ctx) {
  FieldSpec spec;
  const std::string kind = j.value("type", "zero");
  if (kind == "zero") {
    spec.kind = FieldSpec::Kind::zero;
  } else if (kind == "uniform") {
    spec.kind = FieldSpec::Kind::uniform;
    spec.vector = {get_num(j, "vx", ctx), get_num(j, "vy", ctx)};
  } else if (kind == "shear") {
    spec.kind = FieldSpec::Kind::shear;
    spec.axis = j.value("axis", "x") == std::string("y") ? Axis::y : Axis::x;
    spec.rate = get_num(j, "rate", ctx);
    spec.base = {j.value("base_vx", 0.0), j.value("base_vy", 0.0)};
  } else if (kind == "vortex") {
    spec.kind = FieldSpec::Kind::vortex;
    spec.center = {get_num(j, "center_x", ctx), get_num(j, "center_y", ctx)};
    spec.strength = get_num(j, "strength", ctx);
  } else if (kind == "gp") {
    spec.kind = FieldSpec::Kind::gp;
    spec.map_path = j.value("map", "");
    if (spec.map_path.empty())
      throw ParseError(ctx + ": gp field needs a 'map' path");
  } else {
    throw ParseError(ctx + ": unknown field type '" + kind + "'");
  }
  return spec;
}

json field_to_json(const FieldSpec& spec) {
  switch (spec.kind) {
    case FieldSpec::Kind::zero:
      return {{"type", "zero"}};
    case FieldSpec::Kind::uniform:
      return {{"type", "uniform"}, {"vx", spec.vector.x}, {"vy", spec.vector.y}};
    case FieldSpec::Kind::shear:
      return {{"type", "shear"},
              {"axis", spec.axis == Axis::x ? "x" : "y"},
              {"rate", spec.rate},
              {"base_vx", spec.base.x},
              {"base_vy", spec.base.y}};
    case FieldSpec::Kind::vortex:
      return {{"type", "vortex"},
              {"center_x", spec.center.x},
              {"center_y", spec.center.y},
              {"strength", spec.strength}};
    case FieldSpec::Kind::gp:
      return {{"type", "gp"}, {"map", spec.map_path}};
  }
  throw DomainError("field_to_json: bad kind");
}

}  // namespace

void save_config(const std::filesystem::path& path, const RunConfig& c) {
  const json j = {
      {"format", "leeway-config-v1"},
      {"vessel",
       {{"max_speed_mps", c.vessel.max_speed},
        {"max_accel_mps2", c.vessel.max_accel},
        {"max_turn_rate_radps", c.vessel.max_turn_rate},
        {"k_wind", c.vessel.k_wind},
        {"k_current", c.vessel.k_current}}},
      {"gains",
       {{"heading", {{"kp", c.gains.heading.kp}, {"ki", c.gains.heading.ki}, {"kd", c.gains.heading.kd}}},
        {"speed", {{"kp", c.gains.speed.kp}, {"ki", c.gains.speed.ki}, {"kd", c.gains.speed.kd}}},
        {"integral_limit", c.gains.integral_limit}}},
      {"augment",
       {{"gain", c.augment.gain},
        {"replan_period_s", c.augment.replan_period_s},
        {"speed_beta", c.augment.speed_beta},
        {"speed_min_mps", c.augment.speed_min_mps},
        {"speed_max_mps", c.augment.speed_max_mps},
        {"max_offset_m", c.augment.max_offset_m},
        {"source",
         c.augment.source == AugmentSource::gp_maps ? "map" : "live"},
        {"live_median3", c.augment.live_median3},
        {"wind_map", c.augment_wind_map},
        {"current_map", c.augment_current_map}}},
      {"fields", {{"wind", field_to_json(c.wind)}, {"current", field_to_json(c.current)}}},
      {"dt_s", c.dt},
      {"seed", c.seed},
      {"start",
       {{"x_m", c.start.position.x},
        {"y_m", c.start.position.y},
        {"heading_deg_compass", math_rad_to_compass_deg(c.start.heading)}}},
  };
  write_text(path, j.dump(2) + "\n");
}

RunConfig load_config(const std::filesystem::path& path) {
  const json j = load_json(path, "leeway-config-v1");
  RunConfig c;
  if (j.contains("vessel")) {
    const auto& v = j.at("vessel");
    c.vessel.max_speed = v.value("max_speed_mps", c.vessel.max_speed);
    c.vessel.max_accel = v.value("max_accel_mps2", c.vessel.max_accel);
    c.vessel.max_turn_rate = v.value("max_turn_rate_radps", c.vessel.max_turn_rate);
    c.vessel.k_wind = v.value("k_wind", c.vessel.k_wind);
    c.vessel.k_current = v.value("k_current", c.vessel.k_current);
  }
  if (j.contains("gains")) {
    const auto& g = j.at("gains");
    auto loop = [&](const char* name, PidLoopGains& out) {
      if (!g.contains(name)) return;
      out.kp = g.at(name).value("kp", out.kp);
      out.ki = g.at(name).value("ki", out.ki);
      out.kd = g.at(name).value("kd", out.kd);
    };
    loop("heading", c.gains.heading);
    loop("speed", c.gains.speed);
    c.gains.integral_limit = g.value("integral_limit", c.gains.integral_limit);
  }
  if (j.contains("augment")) {
    const auto& a = j.at("augment");
    c.augment.gain = a.value("gain", c.augment.gain);
    c.augment.replan_period_s = a.value("replan_period_s", c.augment.replan_period_s);
    c.augment.speed_beta = a.value("speed_beta", c.augment.speed_beta);
    c.augment.speed_min_mps = a.value("speed_min_mps", c.augment.speed_min_mps);
    c.augment.speed_max_mps = a.value("speed_max_mps", c.augment.speed_max_mps);
    c.augment.max_offset_m = a.value("max_offset_m", c.augment.max_offset_m);
    c.augment.source = a.value("source", "live") == std::string("map")
                           ? AugmentSource::gp_maps
                           : AugmentSource::live_sensors;
    c.augment.live_median3 = a.value("live_median3", false);
    c.augment_wind_map = a.value("wind_map", "");
    c.augment_current_map = a.value("current_map", "");
  }
  if (j.contains("fields")) {
    const auto& f = j.at("fields");
    if (f.contains("wind")) c.wind = field_from_json(f.at("wind"), "fields.wind");
    if (f.contains("current"))
      c.current = field_from_json(f.at("current"), "fields.current");
  }
  c.dt = j.value("dt_s", c.dt);
  if (!(c.dt > 0.0 && c.dt <= 1.0))
    throw DomainError(path.string() + ": dt_s must be in (0, 1]");
  c.seed = j.value("seed", c.seed);
  if (j.contains("start")) {
    const auto& s = j.at("start");
    c.start.position = {s.value("x_m", 0.0), s.value("y_m", 0.0)};
    c.start.heading =
        compass_deg_to_math_rad(s.value("heading_deg_compass", 90.0));
  }
  return c;
}

std::unique_ptr<ForceField> make_field(const FieldSpec& spec,
                                       const std::filesystem::path& base_dir) {
  switch (spec.kind) {
    case FieldSpec::Kind::zero:
      return std::make_unique<ZeroField>();
    case FieldSpec::Kind::uniform:
      return std::make_unique<UniformField>(spec.vector);
    case FieldSpec::Kind::shear:
      return std::make_unique<ShearField>(spec.axis, spec.rate, spec.base);
    case FieldSpec::Kind::vortex:
      return std::make_unique<VortexField>(spec.center, spec.strength);
    case FieldSpec::Kind::gp: {
      std::filesystem::path p = spec.map_path;
      if (p.is_relative()) p = base_dir / p;
      return std::make_unique<GpField>(load_force_map(p));
    }
  }
  throw DomainError("make_field: bad kind");
}

// ---------------------------------------------------------------------------
// trajectory logs

void save_trajectory(const std::filesystem::path& path, const TrajectoryLog& log) {
  std::string out = std::string(kTrajectoryHeader) + "\n";
  for (const auto& s : log.samples) {
    out += format_double(s.t) + "," + format_double(s.state.pose.position.x) +
           "," + format_double(s.state.pose.position.y) + "," +
           format_double(math_rad_to_compass_deg(s.state.pose.heading)) + "," +
           format_double(s.state.water_speed) + "," +
           format_double(s.state.ground_vel.x) + "," +
           format_double(s.state.ground_vel.y) + "," +
           std::to_string(s.wp_index) + "," + format_double(s.target.position.x) +
           "," + format_double(s.target.position.y) + "," +
           format_double(s.intermediate.position.x) + "," +
           format_double(s.intermediate.position.y) + "," +
           format_double(s.wind.x) + "," + format_double(s.wind.y) + "," +
           format_double(s.current.x) + "," + format_double(s.current.y) + "\n";
  }
  out += "# meta mission_hash=" + std::to_string(log.mission_hash) +
         " timed_out=" + (log.timed_out ? "1" : "0") +
         " completed=" + (log.completed ? "1" : "0") +
         " acceptance_radius=" + format_double(log.acceptance_radius) + "\n";
  write_text(path, out);
}

TrajectoryLog load_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTrajectoryHeader)
    throw ParseError(path.string() + ": header does not match trajectory schema");

  TrajectoryLog log;
  int line_no = 1;
  double prev_t = -std::numeric_limits<double>::infinity();
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      // trailing meta comment
      std::istringstream meta(line.substr(1));
      std::string token;
      while (meta >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "mission_hash") log.mission_hash = std::stoull(value);
        if (key == "timed_out") log.timed_out = (value == "1");
        if (key == "completed") log.completed = (value == "1");
        if (key == "acceptance_radius") log.acceptance_radius = std::stod(value);
      }
      continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != 16)
      throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                       ": expected 16 columns, got " +
                       std::to_string(fields.size()));
    TrajectorySample s;
    s.t = parse_num(fields[0], line_no, "t_s");
    s.state.pose.position = {parse_num(fields[1], line_no, "x_m"),
                             parse_num(fields[2], line_no, "y_m")};
    s.state.pose.heading = compass_deg_to_math_rad(
        parse_num(fields[3], line_no, "heading_deg_compass"));
    s.state.water_speed = parse_num(fields[4], line_no, "water_speed_mps");
    s.state.ground_vel = {parse_num(fields[5], line_no, "gvx_mps"),
                          parse_num(fields[6], line_no, "gvy_mps")};
    s.state.time = s.t;
    s.wp_index = static_cast<int>(parse_num(fields[7], line_no, "wp_index"));
    s.target.position = {parse_num(fields[8], line_no, "target_x_m"),
                         parse_num(fields[9], line_no, "target_y_m")};
    s.intermediate.position = {
        parse_num(fields[10], line_no, "intermediate_x_m"),
        parse_num(fields[11], line_no, "intermediate_y_m")};
    s.wind = {parse_num(fields[12], line_no, "wind_vx"),
              parse_num(fields[13], line_no, "wind_vy")};
    s.current = {parse_num(fields[14], line_no, "cur_vx"),
                 parse_num(fields[15], line_no, "cur_vy")};
    if (s.t <= prev_t)
      throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                       ": time is not strictly increasing");
    prev_t = s.t;
    log.samples.push_back(s);
  }
  if (log.samples.empty())
    throw ParseError(path.string() + ": no trajectory samples");
  return log;
}

// ---------------------------------------------------------------------------
// sensor survey logs

SensorLog load_sensor_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  {
    const auto expected = split_csv_line(kSensorHeader);
    const auto got = split_csv_line(line);
    if (got.size() != expected.size()) {
      throw ParseError(path.string() + ": line 1: expected " +
                       std::to_string(expected.size()) + " columns, got " +
                       std::to_string(got.size()));
    }
    for (std::size_t i = 0; i < expected.size(); ++i)
      if (got[i] != expected[i])
        throw ParseError(path.string() + ": line 1: column " +
                         std::to_string(i + 1) + " is '" + got[i] +
                         "', expected '" + expected[i] + "'");
  }

  SensorLog log;
  bool have_origin = false;
  int line_no = 1;
  int total_rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    ++total_rows;
    const auto fields = split_csv_line(line);
    if (fields.size() != 9)
      throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                       ": expected 9 columns, got " +
                       std::to_string(fields.size()));
    double v[9];
    bool ok = true;
    static constexpr const char* kCols[9] = {
        "t_s", "lat_deg", "lon_deg", "heading_deg_compass", "sog_mps",
        "wind_speed_mps", "wind_bearing_rel_deg", "water_speed_mps",
        "water_bearing_rel_deg"};
    for (int i = 0; i < 9; ++i) {
      v[i] = parse_num(fields[static_cast<std::size_t>(i)], line_no, kCols[i]);
      if (!std::isfinite(v[i])) ok = false;
    }
    if (!ok) {
      ++log.skipped_rows;
      logging::warn("%s: line %d skipped (non-finite field)",
                    path.string().c_str(), line_no);
      continue;
    }
    if (!have_origin) {
      log.frame.origin = {v[1], v[2]};
      have_origin = true;
    }
    SensorLog::Row row;
    row.t = v[0];
    row.pose.position = to_local(log.frame, {v[1], v[2]});
    row.pose.heading = compass_deg_to_math_rad(v[3]);
    row.sog = v[4];
    log.track.push_back(row);

    RelativeReading wind;
    wind.source = SourceKind::wind;
    wind.time = v[0];
    wind.speed = v[5];
    wind.bearing_rel = v[6] * kPi / 180.0;
    log.readings.push_back(wind);

    RelativeReading water;
    water.source = SourceKind::current;
    water.time = v[0];
    water.speed = v[7];
    water.bearing_rel = v[8] * kPi / 180.0;
    log.readings.push_back(water);
  }
  if (total_rows == 0) throw ParseError(path.string() + ": no data rows");
  if (log.skipped_rows * 10 > total_rows)
    throw ParseError(path.string() + ": more than 10% of rows skipped (" +
                     std::to_string(log.skipped_rows) + "/" +
                     std::to_string(total_rows) + ")");
  return log;
}

void save_sensor_log(const std::filesystem::path& path, const SensorLog& log) {
  std::string out = std::string(kSensorHeader) + "\n";
  for (std::size_t i = 0; i < log.track.size(); ++i) {
    const auto& row = log.track[i];
    const GeoPoint geo = from_local(log.frame, row.pose.position);
    const RelativeReading& wind = log.readings[2 * i];
    const RelativeReading& water = log.readings[2 * i + 1];
    out += format_double(row.t) + "," + format_double(geo.lat) + "," +
           format_double(geo.lon) + "," +
           format_double(math_rad_to_compass_deg(row.pose.heading)) + "," +
           format_double(row.sog) + "," + format_double(wind.speed) + "," +
           format_double(wind.bearing_rel * 180.0 / kPi) + "," +
           format_double(water.speed) + "," +
           format_double(water.bearing_rel * 180.0 / kPi) + "\n";
  }
  write_text(path, out);
}

std::vector<ForceSample> sensor_samples(const SensorLog& log, SourceKind source) {
  std::vector<ForceSample> samples;
  samples.reserve(log.track.size());
  for (std::size_t i = 0; i < log.track.size(); ++i) {
    const auto& row = log.track[i];
    const RelativeReading& r =
        (source == SourceKind::wind) ? log.readings[2 * i] : log.readings[2 * i + 1];
    const Vec2 ground_vel = Vec2{std::cos(row.pose.heading),
                                 std::sin(row.pose.heading)} *
                            row.sog;
    ForceSample s;
    s.position = row.pose.position;
    s.vector = relative_to_absolute(r, row.pose, ground_vel);
    s.source = source;
    s.time = row.t;
    samples.push_back(s);
  }
  return samples;
}

// ---------------------------------------------------------------------------
// displacement training sets

void save_training_set(const std::filesystem::path& path,
                       const std::vector<DisplacementSample>& samples) {
  std::string out = "f_along,f_cross,v_cmd,e_along,e_cross\n";
  for (const auto& s : samples) {
    out += format_double(s.features.f_along) + "," +
           format_double(s.features.f_cross) + "," +
           format_double(s.features.v_cmd) + "," + format_double(s.e_along) +
           "," + format_double(s.e_cross) + "\n";
  }
  write_text(path, out);
}

std::vector<DisplacementSample> load_training_set(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "f_along,f_cross,v_cmd,e_along,e_cross")
    throw ParseError(path.string() + ": header does not match training schema");
  std::vector<DisplacementSample> samples;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 5)
      throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                       ": expected 5 columns");
    DisplacementSample s;
    s.features.f_along = parse_num(fields[0], line_no, "f_along");
    s.features.f_cross = parse_num(fields[1], line_no, "f_cross");
    s.features.v_cmd = parse_num(fields[2], line_no, "v_cmd");
    s.e_along = parse_num(fields[3], line_no, "e_along");
    s.e_cross = parse_num(fields[4], line_no, "e_cross");
    samples.push_back(s);
  }
  return samples;
}

// ---------------------------------------------------------------------------
// GeoJSON export

void write_geojson(const std::filesystem::path& path, const Frame& frame,
                   const Mission& mission, const TrajectoryLog& log) {
  auto coords = [&](const LocalPoint& p) {
    const GeoPoint geo = from_local(frame, p);
    return json::array({geo.lon, geo.lat});
  };
  json planned = json::array();
  for (const auto& wp : mission.waypoints) planned.push_back(coords(wp.position));
  json executed = json::array();
  for (const auto& s : log.samples)
    executed.push_back(coords(s.state.pose.position));

  const json j = {
      {"type", "FeatureCollection"},
      {"features",
       {{{"type", "Feature"},
         {"properties", {{"name", "planned"}}},
         {"geometry", {{"type", "LineString"}, {"coordinates", planned}}}},
        {{"type", "Feature"},
         {"properties",
          {{"name", "executed"},
           {"timed_out", log.timed_out},
           {"completed", log.completed}}},
         {"geometry", {{"type", "LineString"}, {"coordinates", executed}}}}}},
  };
  write_text(path, j.dump(2) + "\n");
}

}  // namespace leeway::io
