#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "leeway/vessel.hpp"

namespace leeway {

/// Path-following statistics of one executed run against its mission.
struct PathMetrics {
  double max_cross_track = 0.0;       // m
  double mean_abs_cross_track = 0.0;  // m
  double pct_over_threshold = 0.0;    // fraction of samples, strict >
  double threshold = 1.0;             // m
  double path_length = 0.0;           // m
  bool completion = false;
  std::uint64_t mission_hash = 0;     // provenance for compare_runs
};

/// Cross-track error of every log sample against its active leg (the segment
/// from the previous true waypoint - or the run start for leg 0 - to the
/// current one).
PathMetrics compute_metrics(const TrajectoryLog& log, const Mission& mission,
                            double threshold = 1.0);

/// Relative reduction (baseline - augmented) / baseline per metric;
/// a zero baseline reports "n/a" (nullopt).
struct ImprovementReport {
  struct Entry {
    std::string name;
    double baseline = 0.0;
    double augmented = 0.0;
    std::optional<double> reduction;  // fraction; nullopt when baseline == 0
  };
  std::vector<Entry> entries;

  std::string to_text() const;
};

ImprovementReport compare_runs(const PathMetrics& baseline,
                               const PathMetrics& augmented);

}  // namespace leeway
