#include "leeway/metrics.hpp"

#include <cmath>
#include <cstdio>

#include "leeway/error.hpp"
#include "leeway/geo.hpp"

namespace leeway {

PathMetrics compute_metrics(const TrajectoryLog& log, const Mission& mission,
                            double threshold) {
  if (log.samples.empty()) throw DataError("compute_metrics: empty log");
  if (mission.waypoints.empty())
    throw DataError("compute_metrics: empty mission");

  PathMetrics m;
  m.threshold = threshold;
  m.mission_hash = log.mission_hash;

  const LocalPoint start = log.samples.front().state.pose.position;
  double abs_sum = 0.0;
  std::size_t over = 0;

  for (std::size_t i = 0; i < log.samples.size(); ++i) {
    const auto& row = log.samples[i];
    if (row.wp_index < 0 ||
        static_cast<std::size_t>(row.wp_index) >= mission.waypoints.size())
      throw DataError("compute_metrics: log wp_index " +
                      std::to_string(row.wp_index) +
                      " does not match mission of " +
                      std::to_string(mission.waypoints.size()) + " waypoints");

    const auto wp = static_cast<std::size_t>(row.wp_index);
    const LocalPoint a =
        (wp == 0) ? start : mission.waypoints[wp - 1].position;
    const LocalPoint b = mission.waypoints[wp].position;

    double cte;
    if (distance(a, b) <= 1e-9)
      cte = distance(row.state.pose.position, b);  // degenerate leg
    else
      cte = cross_track(row.state.pose.position, a, b);

    const double abs_cte = std::abs(cte);
    m.max_cross_track = std::max(m.max_cross_track, abs_cte);
    abs_sum += abs_cte;
    if (abs_cte > threshold) ++over;

    if (i > 0)
      m.path_length += distance(log.samples[i - 1].state.pose.position,
                                row.state.pose.position);
  }

  m.mean_abs_cross_track = abs_sum / static_cast<double>(log.samples.size());
  m.pct_over_threshold =
      static_cast<double>(over) / static_cast<double>(log.samples.size());
  m.completion = log.completed && !log.timed_out;
  return m;
}

ImprovementReport compare_runs(const PathMetrics& baseline,
                               const PathMetrics& augmented) {
  if (baseline.mission_hash != 0 && augmented.mission_hash != 0 &&
      baseline.mission_hash != augmented.mission_hash)
    throw DataError("compare_runs: metrics come from different missions");

  auto entry = [](const std::string& name, double a, double b) {
    ImprovementReport::Entry e;
    e.name = name;
    e.baseline = a;
    e.augmented = b;
    if (a != 0.0) e.reduction = (a - b) / a;
    return e;
  };

  ImprovementReport report;
  report.entries = {
      entry("max_cross_track_m", baseline.max_cross_track,
            augmented.max_cross_track),
      entry("mean_abs_cross_track_m", baseline.mean_abs_cross_track,
            augmented.mean_abs_cross_track),
      entry("pct_over_threshold", baseline.pct_over_threshold,
            augmented.pct_over_threshold),
      entry("path_length_m", baseline.path_length, augmented.path_length),
  };
  return report;
}

std::string ImprovementReport::to_text() const {
  std::string out =
      "metric                     baseline     augmented    reduction\n";
  char line[160];
  for (const auto& e : entries) {
    if (e.reduction)
      std::snprintf(line, sizeof(line), "%-26s %-12.4f %-12.4f %.1f%%\n",
                    e.name.c_str(), e.baseline, e.augmented,
                    *e.reduction * 100.0);
    else
      std::snprintf(line, sizeof(line), "%-26s %-12.4f %-12.4f n/a\n",
                    e.name.c_str(), e.baseline, e.augmented);
    out += line;
  }
  return out;
}

}  // namespace leeway
