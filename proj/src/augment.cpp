#include "leeway/augment.hpp"

#include <algorithm>
#include <cmath>

#include "leeway/error.hpp"

namespace leeway {

void AugmentConfig::validate() const {
  if (!(gain >= 0.0)) throw DomainError("AugmentConfig.gain must be >= 0");
  if (!(replan_period_s > 0.0))
    throw DomainError("AugmentConfig.replan_period_s must be > 0");
  if (!(speed_min_mps <= speed_max_mps))
    throw DomainError("AugmentConfig: speed_min_mps must be <= speed_max_mps");
  if (!(max_offset_m > 0.0))
    throw DomainError("AugmentConfig.max_offset_m must be > 0");
}

ForceEstimate force_estimate_live(const VesselState& state,
                                  std::span<const RelativeReading> readings) {
  const RelativeReading* wind = nullptr;
  const RelativeReading* current = nullptr;
  for (const auto& r : readings) {
    auto*& slot = (r.source == SourceKind::wind) ? wind : current;
    if (!slot || r.time >= slot->time) slot = &r;
  }
  if (!wind) throw EstimateError("force_estimate: no wind reading available");
  if (!current)
    throw EstimateError("force_estimate: no current reading available");
  return {relative_to_absolute(*wind, state.pose, state.ground_vel),
          relative_to_absolute(*current, state.pose, state.ground_vel)};
}

ForceEstimate force_estimate_maps(const VesselState& state,
                                  const GpForceMap& wind_map,
                                  const GpForceMap& current_map) {
  return {wind_map.predict(state.pose.position).mean,
          current_map.predict(state.pose.position).mean};
}

FeatureVector make_features(const Waypoint& true_wp, const VesselState& state,
                            const ForceEstimate& forces, double k_wind,
                            double k_current) {
  const Vec2 leg = true_wp.position - state.pose.position;
  const double len = leg.norm();
  FeatureVector f;
  f.v_cmd = true_wp.speed;
  if (len <= 1e-9) return f;  // degenerate leg: zero force features
  const Vec2 along = leg / len;
  const Vec2 combined = forces.wind * k_wind + forces.current * k_current;
  f.f_along = combined.dot(along);
  f.f_cross = combined.dot(along.perp());
  return f;
}

Waypoint intermediate_waypoint(const Waypoint& true_wp, const VesselState& state,
                               const ForceEstimate& forces,
                               const DisplacementModel& model,
                               const AugmentConfig& config, double k_wind,
                               double k_current) {
  const Vec2 leg = true_wp.position - state.pose.position;
  const double len = leg.norm();
  if (len <= 1e-9) return true_wp;

  const FeatureVector f =
      make_features(true_wp, state, forces, k_wind, k_current);
  const Vec2 predicted = predict_displacement(model, f);

  // mirror offset: pre-compensate the predicted displacement
  const Vec2 along = leg / len;
  const Vec2 left = along.perp();
  Vec2 offset = along * (-config.gain * predicted.x) +
                left * (-config.gain * predicted.y);
  const double mag = offset.norm();
  if (mag > config.max_offset_m) offset = offset * (config.max_offset_m / mag);

  Waypoint wp = true_wp;
  wp.position = true_wp.position + offset;
  return wp;
}

double adjust_speed(double leg_speed, const Vec2& predicted_error,
                    const AugmentConfig& config) {
  constexpr double kReferenceLengthM = 10.0;
  const double v =
      leg_speed * (1.0 + config.speed_beta * (-predicted_error.x) /
                             kReferenceLengthM);
  return std::clamp(v, config.speed_min_mps, config.speed_max_mps);
}

Augmenter::Augmenter(DisplacementModel model, AugmentConfig config,
                     VesselParams params,
                     std::shared_ptr<const GpForceMap> wind_map,
                     std::shared_ptr<const GpForceMap> current_map)
    : model_(std::move(model)),
      config_(config),
      params_(params),
      wind_map_(std::move(wind_map)),
      current_map_(std::move(current_map)) {
  config_.validate();
  if (config_.source == AugmentSource::gp_maps && (!wind_map_ || !current_map_))
    throw EstimateError("augmenter in map mode needs both wind and current maps");
}

void Augmenter::reset() {
  has_cache_ = false;
  last_replan_time_ = 0.0;
  recent_count_ = 0;
}

namespace {
double median3(double a, double b, double c) {
  return std::max(std::min(a, b), std::min(std::max(a, b), c));
}
}  // namespace

ForceEstimate Augmenter::estimate(const VesselState& state,
                                  const SensorSnapshot& sensors) {
  if (config_.source == AugmentSource::gp_maps)
    return force_estimate_maps(state, *wind_map_, *current_map_);

  const RelativeReading readings[2] = {sensors.wind, sensors.current};
  ForceEstimate est = force_estimate_live(state, readings);
  if (config_.live_median3) {
    const int slot = recent_count_ % 3;
    recent_wind_[slot] = est.wind;
    recent_current_[slot] = est.current;
    ++recent_count_;
    if (recent_count_ >= 3) {
      est.wind = {median3(recent_wind_[0].x, recent_wind_[1].x, recent_wind_[2].x),
                  median3(recent_wind_[0].y, recent_wind_[1].y, recent_wind_[2].y)};
      est.current = {median3(recent_current_[0].x, recent_current_[1].x,
                             recent_current_[2].x),
                     median3(recent_current_[0].y, recent_current_[1].y,
                             recent_current_[2].y)};
    }
  }
  return est;
}

Waypoint Augmenter::tick(const VesselState& state, const Waypoint& true_target,
                         double now, const SensorSnapshot& sensors) {
  const bool target_changed =
      !has_cache_ || !(cached_target_ == true_target.position);
  if (has_cache_ && !target_changed &&
      now - last_replan_time_ < config_.replan_period_s)
    return cached_;

  const ForceEstimate forces = estimate(state, sensors);
  const FeatureVector f =
      make_features(true_target, state, forces, params_.k_wind, params_.k_current);
  // gain scales the prediction before both uses, so gain = 0 is exactly
  // equivalent to no augmentation
  const Vec2 scaled = predict_displacement(model_, f) * config_.gain;

  const Vec2 leg = true_target.position - state.pose.position;
  const double len = leg.norm();
  Waypoint wp = true_target;
  if (len > 1e-9) {
    const Vec2 along = leg / len;
    Vec2 offset = along * (-scaled.x) + along.perp() * (-scaled.y);
    const double mag = offset.norm();
    if (mag > config_.max_offset_m)
      offset = offset * (config_.max_offset_m / mag);
    wp.position = true_target.position + offset;
    wp.speed = adjust_speed(true_target.speed, scaled, config_);
  }

  cached_ = wp;
  cached_target_ = true_target.position;
  last_replan_time_ = now;
  has_cache_ = true;
  return wp;
}

}  // namespace leeway
