#include "leeway/vessel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "leeway/error.hpp"

namespace leeway {

void VesselParams::validate() const {
  if (!(max_speed > 0.0)) throw DomainError("VesselParams.max_speed must be > 0");
  if (!(max_accel > 0.0)) throw DomainError("VesselParams.max_accel must be > 0");
  if (!(max_turn_rate > 0.0))
    throw DomainError("VesselParams.max_turn_rate must be > 0");
  if (!(k_wind >= 0.0 && k_wind <= 1.0))
    throw DomainError("VesselParams.k_wind must be in [0, 1]");
  if (!(k_current >= 0.0 && k_current <= 1.0))
    throw DomainError("VesselParams.k_current must be in [0, 1]");
}

void PidGains::validate() const {
  for (const auto& g : {heading, speed})
    if (g.kp < 0.0 || g.ki < 0.0 || g.kd < 0.0)
      throw DomainError("PidGains: gains must be >= 0");
  if (!(integral_limit > 0.0))
    throw DomainError("PidGains.integral_limit must be > 0");
  if (lookahead_m < 0.0)
    throw DomainError("PidGains.lookahead_m must be >= 0");
  if (course_tau_s < 0.0)
    throw DomainError("PidGains.course_tau_s must be >= 0");
}

void Mission::validate(double max_speed) const {
  if (waypoints.empty()) throw DomainError("Mission: needs >= 1 waypoint");
  if (!(acceptance_radius > 0.0))
    throw DomainError("Mission.acceptance_radius must be > 0");
  for (const auto& wp : waypoints) {
    if (!wp.position.finite()) throw DomainError("Mission: non-finite waypoint");
    if (!(wp.speed > 0.0)) throw DomainError("Mission: waypoint speed must be > 0");
    if (wp.speed > max_speed)
      throw DomainError("Mission: waypoint speed exceeds vessel max_speed");
  }
}

std::uint64_t mission_hash(const Mission& m) {
  // FNV-1a over the raw waypoint doubles plus the acceptance radius
  std::uint64_t hash = 14695981039346656037ull;
  auto mix = [&hash](double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
      hash ^= (bits >> (8 * i)) & 0xffu;
      hash *= 1099511628211ull;
    }
  };
  mix(m.acceptance_radius);
  for (const auto& wp : m.waypoints) {
    mix(wp.position.x);
    mix(wp.position.y);
    mix(wp.speed);
  }
  return hash;
}

namespace {

void check_dt(double dt) {
  if (!(dt > 0.0 && dt <= 1.0)) throw DomainError("dt must be in (0, 1] s");
}

double pid_update(const PidLoopGains& g, double error, double dt,
                  double& integral, double& prev_error, bool primed,
                  double integral_limit) {
  integral = std::clamp(integral + error * dt, -integral_limit, integral_limit);
  const double deriv = primed ? (error - prev_error) / dt : 0.0;
  prev_error = error;
  return g.kp * error + g.ki * integral + g.kd * deriv;
}

}  // namespace

Command pid_step(const VesselState& state, const Waypoint& active_wp,
                 const LocalPoint& leg_start, const PidGains& gains, double dt,
                 PidMemory& memory) {
  check_dt(dt);

  // guidance: steer at a carrot on the leg line, the waypoint itself once
  // the remaining line is shorter than the lookahead
  LocalPoint carrot = active_wp.position;
  const Vec2 leg = active_wp.position - leg_start;
  const double leg_len = leg.norm();
  if (leg_len > 1e-9 && gains.lookahead_m > 0.0) {
    const Vec2 along = leg / leg_len;
    const double station =
        std::clamp((state.pose.position - leg_start).dot(along), 0.0, leg_len);
    const double carrot_station = std::min(station + gains.lookahead_m, leg_len);
    carrot = leg_start + along * carrot_station;
  }
  Vec2 to_carrot = carrot - state.pose.position;
  if (to_carrot.norm() < 1e-9) to_carrot = active_wp.position - state.pose.position;

  // the navigator observes course over ground (GPS track), smoothed with a
  // first-order filter like a receiver's track estimate
  const double course_inst =
      (state.ground_vel.norm() > 0.05)
          ? std::atan2(state.ground_vel.y, state.ground_vel.x)
          : state.pose.heading;
  if (!memory.course_primed) {
    memory.course_filtered = course_inst;
    memory.course_primed = true;
  } else if (gains.course_tau_s > 0.0) {
    memory.course_filtered = wrap_angle(
        memory.course_filtered +
        wrap_angle(course_inst - memory.course_filtered) *
            std::min(1.0, dt / gains.course_tau_s));
  } else {
    memory.course_filtered = course_inst;
  }

  const double bearing = std::atan2(to_carrot.y, to_carrot.x);
  const double heading_error = wrap_angle(bearing - memory.course_filtered);
  const double speed_error = active_wp.speed - state.water_speed;

  Command cmd;
  cmd.target_heading = bearing;
  cmd.turn_rate =
      pid_update(gains.heading, heading_error, dt, memory.heading_integral,
                 memory.heading_prev_error, memory.primed, gains.integral_limit);
  const double speed_out =
      pid_update(gains.speed, speed_error, dt, memory.speed_integral,
                 memory.speed_prev_error, memory.primed, gains.integral_limit);
  cmd.target_speed = std::max(0.0, state.water_speed + speed_out);
  memory.primed = true;
  return cmd;
}

VesselState step(const VesselState& state, const Command& cmd,
                 const ForceField& wind, const ForceField& current,
                 const VesselParams& params, double dt) {
  check_dt(dt);
  VesselState next = state;

  const double turn = std::clamp(cmd.turn_rate, -params.max_turn_rate,
                                 params.max_turn_rate);
  next.pose.heading = wrap_angle(state.pose.heading + turn * dt);

  const double target_speed = std::clamp(cmd.target_speed, 0.0, params.max_speed);
  const double dv = std::clamp(target_speed - state.water_speed,
                               -params.max_accel * dt, params.max_accel * dt);
  next.water_speed = std::clamp(state.water_speed + dv, 0.0, params.max_speed);

  const Vec2 wind_v = wind.query(state.pose.position);
  const Vec2 current_v = current.query(state.pose.position);
  next.ground_vel =
      Vec2{std::cos(next.pose.heading), std::sin(next.pose.heading)} *
          next.water_speed +
      current_v * params.k_current + wind_v * params.k_wind;

  next.pose.position = state.pose.position + next.ground_vel * dt;
  next.time = state.time + dt;
  return next;
}

RelativeReading make_wind_reading(const Vec2& true_wind, const VesselState& state) {
  // anemometer sees apparent wind: true minus vehicle velocity
  const Vec2 apparent = true_wind - state.ground_vel;
  RelativeReading r;
  r.source = SourceKind::wind;
  r.time = state.time;
  r.speed = apparent.norm();
  r.bearing_rel = (r.speed > 0.0)
                      ? wrap_angle(std::atan2(apparent.y, apparent.x) -
                                   state.pose.heading)
                      : 0.0;
  return r;
}

RelativeReading make_current_reading(const Vec2& true_current,
                                     const VesselState& state) {
  // paddle wheel sees the hull's velocity through the water
  const Vec2 through_water = state.ground_vel - true_current;
  RelativeReading r;
  r.source = SourceKind::current;
  r.time = state.time;
  r.speed = through_water.norm();
  r.bearing_rel = (r.speed > 0.0)
                      ? wrap_angle(std::atan2(through_water.y, through_water.x) -
                                   state.pose.heading)
                      : 0.0;
  return r;
}

TrajectoryLog run_mission(const Mission& mission, const Pose& start,
                          const PidGains& gains, const VesselParams& params,
                          const ForceField& wind, const ForceField& current,
                          double dt, WaypointAugmenter* augmenter) {
  check_dt(dt);
  params.validate();
  gains.validate();
  mission.validate(params.max_speed);

  double straight_line = 0.0;
  double slowest = std::numeric_limits<double>::infinity();
  LocalPoint prev = start.position;
  for (const auto& wp : mission.waypoints) {
    straight_line += distance(prev, wp.position);
    slowest = std::min(slowest, wp.speed);
    prev = wp.position;
  }
  const double timeout = 10.0 * straight_line / slowest;

  TrajectoryLog log;
  log.mission_hash = mission_hash(mission);
  log.acceptance_radius = mission.acceptance_radius;
  log.samples.reserve(static_cast<std::size_t>(timeout / dt) + 2);

  VesselState state;
  state.pose = start;
  PidMemory memory;
  if (augmenter) augmenter->reset();

  std::size_t wp_index = 0;
  const std::size_t n = mission.waypoints.size();
  Waypoint last_intermediate = mission.waypoints.front();
  LocalPoint leg_start = start.position;

  while (true) {
    const Vec2 wind_v = wind.query(state.pose.position);
    const Vec2 current_v = current.query(state.pose.position);

    while (wp_index < n &&
           distance(state.pose.position, mission.waypoints[wp_index].position) <=
               mission.acceptance_radius) {
      leg_start = mission.waypoints[wp_index].position;
      ++wp_index;
    }
    if (wp_index == n) {
      log.completed = true;
      log.samples.push_back({state.time, state, static_cast<int>(n) - 1,
                             mission.waypoints.back(), last_intermediate,
                             wind_v, current_v});
      break;
    }

    const Waypoint& target = mission.waypoints[wp_index];
    Waypoint intermediate = target;
    if (augmenter) {
      const SensorSnapshot sensors{make_wind_reading(wind_v, state),
                                   make_current_reading(current_v, state)};
      intermediate = augmenter->tick(state, target, state.time, sensors);
    }
    last_intermediate = intermediate;

    log.samples.push_back({state.time, state, static_cast<int>(wp_index),
                           target, intermediate, wind_v, current_v});

    const Command cmd = pid_step(state, intermediate, leg_start, gains, dt, memory);
    state = step(state, cmd, wind, current, params, dt);

    if (state.time > timeout) {
      log.timed_out = true;
      const Vec2 w2 = wind.query(state.pose.position);
      const Vec2 c2 = current.query(state.pose.position);
      log.samples.push_back({state.time, state, static_cast<int>(wp_index),
                             target, intermediate, w2, c2});
      break;
    }
  }
  return log;
}

}  // namespace leeway
