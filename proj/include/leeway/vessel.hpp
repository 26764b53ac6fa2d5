#pragma once

#include <cstdint>
#include <vector>

#include "leeway/forcefield.hpp"
#include "leeway/geo.hpp"
#include "leeway/sensors.hpp"

namespace leeway {

/// Kinematic limits and drift couplings of the simulated hull.
struct VesselParams {
  double max_speed = 4.0;      // m/s, propulsion through water
  double max_accel = 1.0;      // m/s^2
  double max_turn_rate = 0.5;  // rad/s
  double k_wind = 0.05;        // wind-drift coupling, [0, 1]
  double k_current = 1.0;      // current-drift coupling, [0, 1]

  void validate() const;
};

struct VesselState {
  Pose pose;
  double water_speed = 0.0;  // m/s through water, in [0, max_speed]
  Vec2 ground_vel;           // m/s, world frame
  double time = 0.0;         // s
};

struct PidLoopGains {
  double kp = 0.0, ki = 0.0, kd = 0.0;
};

/// Heading and speed loop gains with a shared absolute integral clamp.
/// Defaults were tuned so a zero-field run tracks its leg within 0.5 m.
/// lookahead_m is the carrot distance of the line-guidance stage: the
/// navigator steers at a point that far ahead on the active leg line.
/// course_tau_s smooths the measured course over ground the way a GPS
/// track estimate is smoothed; the lag it introduces is what lets strong
/// drift excite the overshoot oscillation seen on the water.
struct PidGains {
  PidLoopGains heading{1.2, 0.05, 0.3};
  PidLoopGains speed{0.8, 0.1, 0.0};
  double integral_limit = 10.0;
  double lookahead_m = 15.0;
  double course_tau_s = 1.5;

  void validate() const;
};

/// Navigator output for one tick. target_heading is the bearing setpoint;
/// turn_rate carries the heading loop's rate request, which step()
/// saturates at max_turn_rate.
struct Command {
  double target_heading = 0.0;  // rad CCW-from-east
  double target_speed = 0.0;    // m/s
  double turn_rate = 0.0;       // rad/s
};

struct Waypoint {
  LocalPoint position;
  double speed = 0.0;  // m/s commanded along the leg toward this point
};

struct Mission {
  std::vector<Waypoint> waypoints;
  double acceptance_radius = 3.0;  // m

  void validate(double max_speed) const;
};

/// Stable content hash used for run provenance checks (compare refuses
/// metrics from different missions).
std::uint64_t mission_hash(const Mission& m);

struct PidMemory {
  double heading_integral = 0.0;
  double heading_prev_error = 0.0;
  double speed_integral = 0.0;
  double speed_prev_error = 0.0;
  double course_filtered = 0.0;  // smoothed course-over-ground estimate
  bool primed = false;           // derivative term needs one prior sample
  bool course_primed = false;
};

/// One tick of the waypoint navigator. Guidance stage: the heading setpoint
/// is the bearing to a carrot point lookahead_m ahead on the leg line from
/// leg_start to the waypoint (the waypoint itself once within lookahead).
/// Control stage: heading PID on the wrapped heading error produces the
/// turn-rate request; the speed PID tracks the waypoint speed. Integrals are
/// clamped to +/- integral_limit.
Command pid_step(const VesselState& state, const Waypoint& active_wp,
                 const LocalPoint& leg_start, const PidGains& gains, double dt,
                 PidMemory& memory);

/// One explicit-Euler step of the kinematic hull with additive drift:
/// ground_vel = water_speed*(cos h, sin h) + k_current*current + k_wind*wind.
/// Fields are sampled at the pre-step position.
VesselState step(const VesselState& state, const Command& cmd,
                 const ForceField& wind, const ForceField& current,
                 const VesselParams& params, double dt);

/// What the hull instruments would report this tick; handed to the
/// augmenter when it runs in live-sensor mode.
struct SensorSnapshot {
  RelativeReading wind;
  RelativeReading current;
};

/// Fabricate hull-relative readings from world-frame truth (the simulation's
/// stand-in for the anemometer and paddle wheel).
RelativeReading make_wind_reading(const Vec2& true_wind, const VesselState& state);
RelativeReading make_current_reading(const Vec2& true_current, const VesselState& state);

/// Supplies the navigator's target each tick. The mission runner calls this
/// with the true target; implementations may return an offset intermediate
/// waypoint instead.
class WaypointAugmenter {
 public:
  virtual ~WaypointAugmenter() = default;
  virtual Waypoint tick(const VesselState& state, const Waypoint& true_target,
                        double now, const SensorSnapshot& sensors) = 0;
  virtual void reset() {}
};

struct TrajectorySample {
  double t = 0.0;
  VesselState state;
  int wp_index = 0;
  Waypoint target;        // true mission waypoint
  Waypoint intermediate;  // navigator input (== target when unaugmented)
  Vec2 wind;              // sensed field values, world frame
  Vec2 current;
};

struct TrajectoryLog {
  std::vector<TrajectorySample> samples;
  bool timed_out = false;
  bool completed = false;
  std::uint64_t mission_hash = 0;
  double acceptance_radius = 3.0;
};

/// Run a full mission. Waypoints advance inside acceptance_radius of the
/// true target; the run times out at 10x the straight-line time at the
/// slowest leg speed (timed_out flag set, log still returned). When an
/// augmenter is supplied, pid_step receives its intermediate waypoint.
TrajectoryLog run_mission(const Mission& mission, const Pose& start,
                          const PidGains& gains, const VesselParams& params,
                          const ForceField& wind, const ForceField& current,
                          double dt, WaypointAugmenter* augmenter = nullptr);

}  // namespace leeway
