#include "leeway/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "leeway/augment.hpp"
#include "leeway/coverage.hpp"
#include "leeway/displacement.hpp"
#include "leeway/error.hpp"
#include "leeway/forcefield.hpp"
#include "leeway/io.hpp"
#include "leeway/log.hpp"
#include "leeway/metrics.hpp"
#include "leeway/vessel.hpp"

namespace leeway::cli {

namespace fs = std::filesystem;

namespace {

struct FitFieldArgs {
  std::string log_path, source = "wind", out, grid_out;
  std::vector<double> hyper;  // signal_std,length_scale,noise_std
  std::string grid;           // "s,l,n;s,l,n;..." candidates
};

void cmd_fit_field(const FitFieldArgs& a) {
  const io::SensorLog sensors = io::load_sensor_log(a.log_path);
  const SourceKind source =
      a.source == "current" ? SourceKind::current : SourceKind::wind;
  const auto samples = io::sensor_samples(sensors, source);

  GpHyperparams h;
  if (!a.hyper.empty()) {
    if (a.hyper.size() != 3)
      throw UsageError("--hyper wants signal_std,length_scale,noise_std");
    h = {a.hyper[0], a.hyper[1], a.hyper[2]};
  } else if (!a.grid.empty()) {
    std::vector<GpHyperparams> grid;
    std::stringstream ss(a.grid);
    std::string item;
    while (std::getline(ss, item, ';')) {
      GpHyperparams c;
      if (std::sscanf(item.c_str(), "%lf,%lf,%lf", &c.signal_std,
                      &c.length_scale, &c.noise_std) != 3)
        throw UsageError("--grid wants 's,l,n;s,l,n;...'");
      grid.push_back(c);
    }
    h = fit_hyperparams(samples, grid);
  } else {
    h = default_hyperparams(samples);
  }

  const GpForceMap map = GpForceMap::fit(samples, h);
  io::save_force_map(a.out, map);
  const std::string grid_out =
      a.grid_out.empty() ? a.out + ".grid.csv" : a.grid_out;
  io::write_grid_csv(grid_out, map);
  std::printf("fitted %s map: %zu samples, signal_std=%s length_scale=%s "
              "noise_std=%s lml=%s\n",
              source_name(source), samples.size(),
              io::format_double(h.signal_std).c_str(),
              io::format_double(h.length_scale).c_str(),
              io::format_double(h.noise_std).c_str(),
              io::format_double(map.log_marginal_likelihood()).c_str());
  std::printf("wrote %s and %s\n", a.out.c_str(), grid_out.c_str());
}

struct TrainArgs {
  std::vector<std::string> trajectories, missions;
  std::string out, export_training;
  double window = 5.0, k_wind = 0.05, k_current = 1.0;
  int robot = 0;
};

void cmd_train_model(const TrainArgs& a) {
  if (a.trajectories.size() != a.missions.size())
    throw UsageError("--trajectory and --mission must be given pairwise");
  TrainingOptions opts{a.window, a.k_wind, a.k_current};
  std::vector<DisplacementSample> samples;
  for (std::size_t i = 0; i < a.trajectories.size(); ++i) {
    const TrajectoryLog log = io::load_trajectory(a.trajectories[i]);
    const io::MissionFile mf = io::load_missions(a.missions[i]);
    if (a.robot < 0 || static_cast<std::size_t>(a.robot) >= mf.robots.size())
      throw DataError("--robot index outside mission file");
    const auto part = build_training_set(
        log, mf.robots[static_cast<std::size_t>(a.robot)], opts);
    samples.insert(samples.end(), part.begin(), part.end());
  }
  const DisplacementModel model = fit_linear(samples);
  io::save_model(a.out, model);
  if (!a.export_training.empty()) io::save_training_set(a.export_training, samples);
  std::printf("trained on %zu samples, residual %s m\n", samples.size(),
              io::format_double(model.fit_residual).c_str());
  std::printf("wrote %s\n", a.out.c_str());
}

struct PlanArgs {
  std::string pattern, region_path, out, starts;
  double spacing = 10.0, orientation_deg = 0.0, speed = 3.0;
  double center_x = 0.0, center_y = 0.0, radius = 100.0;
  int robots = 1;
  std::string method = "split";  // split | partition
};

std::vector<LocalPoint> parse_points(const std::string& text) {
  std::vector<LocalPoint> points;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    LocalPoint p;
    if (std::sscanf(item.c_str(), "%lf,%lf", &p.x, &p.y) != 2)
      throw UsageError("--starts wants 'x,y;x,y;...'");
    points.push_back(p);
  }
  return points;
}

void cmd_plan(const PlanArgs& a) {
  Frame frame;  // default origin unless a region file provides one

  if (a.pattern == "star") {
    const auto missions =
        star_pattern({a.center_x, a.center_y}, a.radius, a.speed);
    io::MissionFile file;
    file.frame = frame;
    file.pattern = "star";
    file.robots = missions;
    io::save_missions(a.out, file);
    std::printf("wrote %zu star missions to %s\n", missions.size(), a.out.c_str());
    return;
  }

  if (a.region_path.empty()) throw UsageError("--region is required");
  const io::RegionFile region = io::load_region(a.region_path);
  frame = region.frame;
  const double orientation = a.orientation_deg * kPi / 180.0;

  CoveragePlan plan;
  if (a.pattern == "boustrophedon") {
    if (!region.lake) throw DataError("boustrophedon needs a lake region");
    if (a.method == "partition" && a.robots > 1) {
      const auto starts = parse_points(a.starts);
      if (static_cast<int>(starts.size()) != a.robots)
        throw UsageError("--starts must list one x,y per robot");
      plan = partition_area(*region.lake, a.robots, starts, a.spacing,
                            orientation, a.speed);
    } else {
      plan = boustrophedon(*region.lake, a.spacing, orientation, a.speed);
      if (a.robots > 1) plan = split_path(plan, a.robots);
    }
  } else if (a.pattern == "l" || a.pattern == "t" || a.pattern == "z") {
    if (!region.river) throw DataError("river patterns need a river region");
    if (a.pattern == "l")
      plan = l_cover(*region.river, a.spacing, a.speed);
    else if (a.pattern == "t")
      plan = t_cover(*region.river, a.spacing, a.speed);
    else
      plan = z_cover(*region.river, a.spacing, a.speed);
    if (a.robots > 1) plan = split_path(plan, a.robots);
  } else {
    throw UsageError("unknown pattern '" + a.pattern + "'");
  }

  io::save_missions(a.out, io::from_plan(plan, frame));
  std::printf("wrote %s plan (%zu lanes, %zu robots) to %s\n",
              pattern_name(plan.pattern), plan.lanes.size(), plan.robots(),
              a.out.c_str());
  if (plan.k_reduced)
    std::printf("warning: robot count reduced to the lane count\n");
}

struct SimArgs {
  std::string mission_path, config_path, model_path, out, geojson;
  bool augment = false;
  int robot = 0;
};

void cmd_simulate(const SimArgs& a) {
  const io::MissionFile mf = io::load_missions(a.mission_path);
  const io::RunConfig config = io::load_config(a.config_path);
  if (a.robot < 0 || static_cast<std::size_t>(a.robot) >= mf.robots.size())
    throw DataError("--robot index outside mission file");
  const Mission& mission = mf.robots[static_cast<std::size_t>(a.robot)];

  const fs::path base = fs::path(a.config_path).parent_path();
  const auto wind = io::make_field(config.wind, base);
  const auto current = io::make_field(config.current, base);

  std::unique_ptr<Augmenter> augmenter;
  if (a.augment) {
    DisplacementModel model;  // zero model unless --model names one
    if (!a.model_path.empty()) model = io::load_model(a.model_path);
    std::shared_ptr<const GpForceMap> wind_map, current_map;
    if (config.augment.source == AugmentSource::gp_maps) {
      if (config.augment_wind_map.empty() || config.augment_current_map.empty())
        throw EstimateError(
            "augment.source=map needs augment.wind_map and augment.current_map");
      fs::path wp = config.augment_wind_map;
      fs::path cp = config.augment_current_map;
      if (wp.is_relative()) wp = base / wp;
      if (cp.is_relative()) cp = base / cp;
      wind_map = io::load_force_map(wp);
      current_map = io::load_force_map(cp);
    }
    augmenter = std::make_unique<Augmenter>(model, config.augment,
                                            config.vessel, wind_map, current_map);
  }
  logging::info("simulate: %zu waypoints, dt=%g, augment=%d",
                mission.waypoints.size(), config.dt, a.augment ? 1 : 0);

  const TrajectoryLog log =
      run_mission(mission, config.start, config.gains, config.vessel, *wind,
                  *current, config.dt, augmenter.get());
  io::save_trajectory(a.out, log);
  if (!a.geojson.empty()) io::write_geojson(a.geojson, mf.frame, mission, log);
  std::printf("simulated %zu ticks, completed=%d timed_out=%d -> %s\n",
              log.samples.size(), log.completed ? 1 : 0, log.timed_out ? 1 : 0,
              a.out.c_str());
}

struct MetricsArgs {
  std::string log_path, mission_path;
  double threshold = 1.0;
  int robot = 0;
};

PathMetrics metrics_for(const MetricsArgs& a) {
  const TrajectoryLog log = io::load_trajectory(a.log_path);
  const io::MissionFile mf = io::load_missions(a.mission_path);
  if (a.robot < 0 || static_cast<std::size_t>(a.robot) >= mf.robots.size())
    throw DataError("--robot index outside mission file");
  return compute_metrics(log, mf.robots[static_cast<std::size_t>(a.robot)],
                         a.threshold);
}

void cmd_metrics(const MetricsArgs& a) {
  const PathMetrics m = metrics_for(a);
  std::printf("max_cross_track_m %s\n", io::format_double(m.max_cross_track).c_str());
  std::printf("mean_abs_cross_track_m %s\n",
              io::format_double(m.mean_abs_cross_track).c_str());
  std::printf("pct_over_threshold %s\n",
              io::format_double(m.pct_over_threshold).c_str());
  std::printf("threshold_m %s\n", io::format_double(m.threshold).c_str());
  std::printf("path_length_m %s\n", io::format_double(m.path_length).c_str());
  std::printf("completion %s\n", m.completion ? "true" : "false");
}

struct CompareArgs {
  std::string baseline, augmented, mission_path;
  double threshold = 1.0;
  int robot = 0;
};

void cmd_compare(const CompareArgs& a) {
  MetricsArgs base{a.baseline, a.mission_path, a.threshold, a.robot};
  MetricsArgs aug{a.augmented, a.mission_path, a.threshold, a.robot};
  const ImprovementReport report =
      compare_runs(metrics_for(base), metrics_for(aug));
  std::fputs(report.to_text().c_str(), stdout);
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"disturbance-aware ASV waypoint navigation toolkit"};
  app.require_subcommand(1);

  FitFieldArgs fit_args;
  auto* fit = app.add_subcommand("fit-field", "fit a GP force map from a sensor log");
  fit->add_option("--log", fit_args.log_path, "sensor survey CSV")->required();
  fit->add_option("--source", fit_args.source, "wind|current")
      ->check(CLI::IsMember({"wind", "current"}));
  fit->add_option("--out", fit_args.out, "output map JSON")->required();
  fit->add_option("--grid-out", fit_args.grid_out, "posterior raster CSV path");
  fit->add_option("--hyper", fit_args.hyper,
                  "signal_std,length_scale,noise_std (skip selection)")
      ->delimiter(',');
  fit->add_option("--grid", fit_args.grid, "candidate list 's,l,n;s,l,n;...'");

  TrainArgs train_args;
  auto* train = app.add_subcommand("train-model",
                                   "fit the displacement model from executed runs");
  train->add_option("--trajectory", train_args.trajectories, "trajectory CSV")
      ->required();
  train->add_option("--mission", train_args.missions, "mission file")->required();
  train->add_option("--out", train_args.out, "output model JSON")->required();
  train->add_option("--export-training", train_args.export_training,
                    "also write the training set CSV");
  train->add_option("--window", train_args.window, "sample window (s)");
  train->add_option("--k-wind", train_args.k_wind, "wind coupling for features");
  train->add_option("--k-current", train_args.k_current,
                    "current coupling for features");
  train->add_option("--robot", train_args.robot, "robot index in the mission file");

  PlanArgs plan_args;
  auto* plan = app.add_subcommand("plan", "generate coverage waypoint missions");
  plan->add_option("--pattern", plan_args.pattern, "boustrophedon|l|t|z|star")
      ->required()
      ->check(CLI::IsMember({"boustrophedon", "l", "t", "z", "star"}));
  plan->add_option("--region", plan_args.region_path, "region JSON file");
  plan->add_option("--spacing", plan_args.spacing, "lane spacing (m)");
  plan->add_option("--orientation", plan_args.orientation_deg,
                   "sweep orientation (deg, math CCW from east)");
  plan->add_option("--speed", plan_args.speed, "leg speed (m/s)");
  plan->add_option("--robots", plan_args.robots, "number of robots");
  plan->add_option("--method", plan_args.method, "split|partition")
      ->check(CLI::IsMember({"split", "partition"}));
  plan->add_option("--starts", plan_args.starts, "robot starts 'x,y;x,y' (partition)");
  plan->add_option("--center-x", plan_args.center_x, "star center x (m)");
  plan->add_option("--center-y", plan_args.center_y, "star center y (m)");
  plan->add_option("--radius", plan_args.radius, "star leg length (m)");
  plan->add_option("--out", plan_args.out, "output mission file")->required();

  SimArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "run a mission in simulation");
  sim->add_option("--mission", sim_args.mission_path, "mission file")->required();
  sim->add_option("--config", sim_args.config_path, "run config JSON")->required();
  sim->add_flag("--augment", sim_args.augment,
                "enable intermediate-waypoint augmentation");
  sim->add_option("--model", sim_args.model_path,
                  "displacement model JSON (with --augment)");
  sim->add_option("--robot", sim_args.robot, "robot index in the mission file");
  sim->add_option("--out", sim_args.out, "output trajectory CSV")->required();
  sim->add_option("--geojson", sim_args.geojson, "also write GeoJSON");

  MetricsArgs metrics_args;
  auto* met = app.add_subcommand("metrics", "path-following metrics of a log");
  met->add_option("--log", metrics_args.log_path, "trajectory CSV")->required();
  met->add_option("--mission", metrics_args.mission_path, "mission file")->required();
  met->add_option("--threshold", metrics_args.threshold, "cross-track threshold (m)");
  met->add_option("--robot", metrics_args.robot, "robot index");

  CompareArgs compare_args;
  auto* cmp = app.add_subcommand("compare", "baseline vs augmented improvement");
  cmp->add_option("--baseline", compare_args.baseline, "PID-only trajectory CSV")
      ->required();
  cmp->add_option("--augmented", compare_args.augmented, "augmented trajectory CSV")
      ->required();
  cmp->add_option("--mission", compare_args.mission_path, "mission file")->required();
  cmp->add_option("--threshold", compare_args.threshold, "cross-track threshold (m)");
  cmp->add_option("--robot", compare_args.robot, "robot index");

  std::vector<const char*> argv;
  argv.push_back("leeway");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (fit->parsed()) {
      cmd_fit_field(fit_args);
    } else if (train->parsed()) {
      cmd_train_model(train_args);
    } else if (plan->parsed()) {
      cmd_plan(plan_args);
    } else if (sim->parsed()) {
      cmd_simulate(sim_args);
    } else if (met->parsed()) {
      cmd_metrics(metrics_args);
    } else if (cmp->parsed()) {
      cmd_compare(compare_args);
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error[usage]: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error[%s]: %s\n", e.kind_name(), e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error[internal]: %s\n", e.what());
    return 1;
  }
  return 0;
}

}  // namespace leeway::cli
