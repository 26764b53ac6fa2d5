#pragma once

#include <Eigen/Dense>
#include <vector>

#include "leeway/geo.hpp"
#include "leeway/sensors.hpp"
#include "leeway/vessel.hpp"

namespace leeway {

/// Regression input for the displacement predictor, expressed in the active
/// leg's path frame so one model serves all leg directions. f_along/f_cross
/// hold the combined drift force (k_wind*wind + k_current*current).
struct FeatureVector {
  double f_along = 0.0;  // m/s along the desired course
  double f_cross = 0.0;  // m/s across the course, positive left
  double v_cmd = 0.0;    // m/s commanded leg speed
  double bias = 1.0;

  Eigen::Vector4d vec() const { return {f_along, f_cross, v_cmd, bias}; }
};

inline constexpr const char* kFeatureNames[4] = {"f_along", "f_cross", "v_cmd",
                                                 "bias"};

/// Schema tag written into model files; bump when the feature layout changes.
inline constexpr const char* kFeatureSchema = "combined-v1";

struct DisplacementSample {
  FeatureVector features;
  double e_along = 0.0;  // m, actual minus desired at the window end
  double e_cross = 0.0;  // m, positive left of course
};

/// Linear map from features to per-window displacement error.
struct DisplacementModel {
  Eigen::Matrix<double, 2, 4> weights = Eigen::Matrix<double, 2, 4>::Zero();
  double fit_residual = 0.0;  // m, RMS over the training set
};

/// Convert a hull-relative reading to a world-frame force vector.
/// Wind: true = apparent + vehicle ground velocity.
/// Current: true = ground velocity - hull velocity through the water.
Vec2 relative_to_absolute(const RelativeReading& r, const Pose& pose,
                          const Vec2& ground_vel);

struct TrainingOptions {
  double window_s = 5.0;   // sample extraction window
  double k_wind = 0.05;    // drift couplings for the combined force feature
  double k_current = 1.0;
};

/// Extract (features, error) pairs from an executed trajectory: one sample
/// per completed window inside each leg. Features average the sensed drift
/// force over the window; the error is actual-minus-desired position at the
/// window end, in the leg's path frame. Legs shorter than the window emit
/// nothing; an empty log yields an empty list.
std::vector<DisplacementSample> build_training_set(
    const TrajectoryLog& log, const Mission& mission,
    const TrainingOptions& opts = {});

/// Least-squares fit of the 2x4 weight matrix (QR factorization). Needs at
/// least 4 samples with a full-rank feature matrix; rank deficiency raises
/// a fit error naming the degenerate columns.
DisplacementModel fit_linear(const std::vector<DisplacementSample>& samples);

/// W * f: predicted (e_along, e_cross) displacement in meters.
Vec2 predict_displacement(const DisplacementModel& model, const FeatureVector& f);

}  // namespace leeway
