#include "leeway/displacement.hpp"

#include <cmath>
#include <string>

#include "leeway/error.hpp"

namespace leeway {

Vec2 relative_to_absolute(const RelativeReading& r, const Pose& pose,
                          const Vec2& ground_vel) {
  if (r.speed < 0.0 || !std::isfinite(r.speed))
    throw DomainError("RelativeReading.speed must be finite and >= 0");
  const double world_angle = pose.heading + r.bearing_rel;
  const Vec2 measured{r.speed * std::cos(world_angle),
                      r.speed * std::sin(world_angle)};
  if (r.source == SourceKind::wind) return measured + ground_vel;
  return ground_vel - measured;
}

std::vector<DisplacementSample> build_training_set(const TrajectoryLog& log,
                                                   const Mission& mission,
                                                   const TrainingOptions& opts) {
  std::vector<DisplacementSample> out;
  if (log.samples.empty()) return out;

  const auto& rows = log.samples;
  std::size_t leg_start = 0;
  while (leg_start < rows.size()) {
    const int wp = rows[leg_start].wp_index;
    if (wp < 0 || static_cast<std::size_t>(wp) >= mission.waypoints.size())
      throw DataError("trajectory wp_index " + std::to_string(wp) +
                      " outside mission of " +
                      std::to_string(mission.waypoints.size()) + " waypoints");
    std::size_t leg_end = leg_start;
    while (leg_end + 1 < rows.size() && rows[leg_end + 1].wp_index == wp)
      ++leg_end;

    // path frame of this leg: previous true waypoint (or the run start) -> target
    const LocalPoint a = (wp == 0)
                             ? rows.front().state.pose.position
                             : mission.waypoints[static_cast<std::size_t>(wp) - 1]
                                   .position;
    const LocalPoint b = mission.waypoints[static_cast<std::size_t>(wp)].position;
    const Vec2 leg_vec = b - a;
    const double leg_len = leg_vec.norm();
    if (leg_len > 1e-9) {
      const Vec2 along = leg_vec / leg_len;
      const Vec2 left = along.perp();
      const double v_cmd = mission.waypoints[static_cast<std::size_t>(wp)].speed;

      std::size_t w0 = leg_start;
      while (w0 < leg_end) {
        // first row at or past the window length
        std::size_t w1 = w0;
        while (w1 < leg_end &&
               rows[w1].t - rows[w0].t < opts.window_s - 1e-9)
          ++w1;
        if (rows[w1].t - rows[w0].t < opts.window_s - 1e-9) break;  // leg ran out

        Vec2 force_sum{0.0, 0.0};
        for (std::size_t i = w0; i <= w1; ++i)
          force_sum += rows[i].wind * opts.k_wind +
                       rows[i].current * opts.k_current;
        const Vec2 force_avg = force_sum / static_cast<double>(w1 - w0 + 1);

        // desired end position: commanded progress along the leg from the
        // window-start station
        const double station0 =
            (rows[w0].state.pose.position - a).dot(along);
        const double dt_window = rows[w1].t - rows[w0].t;
        const LocalPoint desired = a + along * (station0 + v_cmd * dt_window);
        const Vec2 err = rows[w1].state.pose.position - desired;

        DisplacementSample s;
        s.features.f_along = force_avg.dot(along);
        s.features.f_cross = force_avg.dot(left);
        s.features.v_cmd = v_cmd;
        s.e_along = err.dot(along);
        s.e_cross = err.dot(left);
        out.push_back(s);

        w0 = w1;
      }
    }
    leg_start = leg_end + 1;
  }
  return out;
}

DisplacementModel fit_linear(const std::vector<DisplacementSample>& samples) {
  const auto m = static_cast<Eigen::Index>(samples.size());
  if (m < 4)
    throw FitError("fit_linear: need >= 4 samples, got " +
                   std::to_string(samples.size()));

  Eigen::MatrixXd features(m, 4);
  Eigen::MatrixXd errors(m, 2);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    features.row(i) = s.features.vec().transpose();
    errors(i, 0) = s.e_along;
    errors(i, 1) = s.e_cross;
  }
  if (!features.allFinite() || !errors.allFinite())
    throw DomainError("fit_linear: non-finite sample values");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(features);
  qr.setThreshold(1e-10);
  if (qr.rank() < 4) {
    const auto perm = qr.colsPermutation().indices();
    std::string degenerate;
    for (Eigen::Index c = qr.rank(); c < 4; ++c) {
      if (!degenerate.empty()) degenerate += ", ";
      degenerate += kFeatureNames[perm(c)];
    }
    throw FitError("fit_linear: rank-deficient feature matrix (degenerate: " +
                   degenerate + ")");
  }

  DisplacementModel model;
  const Eigen::MatrixXd solution = qr.solve(errors);  // 4x2
  model.weights = solution.transpose();

  const Eigen::MatrixXd residual = features * solution - errors;
  model.fit_residual =
      std::sqrt(residual.rowwise().squaredNorm().sum() / static_cast<double>(m));
  return model;
}

Vec2 predict_displacement(const DisplacementModel& model, const FeatureVector& f) {
  const Eigen::Vector2d e = model.weights * f.vec();
  return {e(0), e(1)};
}

}  // namespace leeway
