#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>

#include "leeway/displacement.hpp"
#include "leeway/forcefield.hpp"
#include "leeway/vessel.hpp"

namespace leeway {

/// Where the augmenter gets its force estimate from.
enum class AugmentSource { live_sensors, gp_maps };

struct AugmentConfig {
  double gain = 1.0;           // offset multiplier applied to the prediction
  double replan_period_s = 1.0;
  double speed_beta = 0.2;     // speed-adjust slope per 10 m of along error
  double speed_min_mps = 0.5;
  double speed_max_mps = 4.0;
  double max_offset_m = 15.0;
  AugmentSource source = AugmentSource::live_sensors;
  bool live_median3 = false;   // 3-sample median filter for spiky sensors

  void validate() const;
};

struct ForceEstimate {
  Vec2 wind;
  Vec2 current;
};

/// Latest-reading estimate: converts the most recent reading per source to a
/// world vector at the vessel's pose. Missing source -> estimation error.
ForceEstimate force_estimate_live(const VesselState& state,
                                  std::span<const RelativeReading> readings);

/// Map-mode estimate: GP posterior means at the vessel position.
ForceEstimate force_estimate_maps(const VesselState& state,
                                  const GpForceMap& wind_map,
                                  const GpForceMap& current_map);

/// Path-frame features for the leg from the vessel toward the true waypoint.
FeatureVector make_features(const Waypoint& true_wp, const VesselState& state,
                            const ForceEstimate& forces, double k_wind,
                            double k_current);

/// Mirror-offset intermediate waypoint: shift the true target by
/// -gain * predicted displacement (converted to world frame), clamped to
/// max_offset_m. Degenerate legs return the true waypoint unchanged.
Waypoint intermediate_waypoint(const Waypoint& true_wp, const VesselState& state,
                               const ForceEstimate& forces,
                               const DisplacementModel& model,
                               const AugmentConfig& config, double k_wind,
                               double k_current);

/// Speed trim: v = clamp(leg_speed * (1 + beta * (-e_along) / 10 m), bounds).
/// A lagging vehicle (e_along < 0) speeds up, an overshooting one slows down.
double adjust_speed(double leg_speed, const Vec2& predicted_error,
                    const AugmentConfig& config);

/// The intermediate-waypoint offset generator wired in front of the PID
/// navigator. Recomputes its waypoint every replan period (or immediately on
/// a target change) and serves the cached one in between. Owned by exactly
/// one mission run.
class Augmenter final : public WaypointAugmenter {
 public:
  Augmenter(DisplacementModel model, AugmentConfig config, VesselParams params,
            std::shared_ptr<const GpForceMap> wind_map = nullptr,
            std::shared_ptr<const GpForceMap> current_map = nullptr);

  Waypoint tick(const VesselState& state, const Waypoint& true_target,
                double now, const SensorSnapshot& sensors) override;
  void reset() override;

  const DisplacementModel& model() const { return model_; }
  const AugmentConfig& config() const { return config_; }

 private:
  ForceEstimate estimate(const VesselState& state, const SensorSnapshot& sensors);

  DisplacementModel model_;
  AugmentConfig config_;
  VesselParams params_;
  std::shared_ptr<const GpForceMap> wind_map_;
  std::shared_ptr<const GpForceMap> current_map_;

  bool has_cache_ = false;
  double last_replan_time_ = 0.0;
  Waypoint cached_;
  LocalPoint cached_target_;
  std::array<Vec2, 3> recent_wind_{};
  std::array<Vec2, 3> recent_current_{};
  int recent_count_ = 0;
};

}  // namespace leeway
