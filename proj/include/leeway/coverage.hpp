#pragma once

#include <span>
#include <string>
#include <vector>

#include "leeway/geo.hpp"
#include "leeway/vessel.hpp"

namespace leeway {

/// Simple CCW polygon bounding a lake survey area.
struct LakeRegion {
  std::vector<LocalPoint> boundary;

  void validate() const;  // throws DomainError (self-intersection, area <= 0)
  double area() const;    // signed shoelace area (positive when CCW)
};

/// Constant-width river corridor: centerline polyline plus total width.
struct RiverCorridor {
  std::vector<LocalPoint> centerline;
  double width = 0.0;

  void validate() const;
  double length() const;
  /// Point, unit tangent and left normal at an arclength station.
  void at_station(double s, LocalPoint& point, Vec2& tangent, Vec2& normal) const;
};

enum class PatternKind { boustrophedon, l_cover, t_cover, z_cover, star };

const char* pattern_name(PatternKind p);

/// A lane is one polyline traversed end to end; transitions between
/// consecutive lanes are straight connector segments.
using Lane = std::vector<LocalPoint>;

/// Coverage plan: lanes in traversal order (and direction), partitioned into
/// contiguous per-robot runs.
struct CoveragePlan {
  PatternKind pattern = PatternKind::boustrophedon;
  double lane_spacing = 0.0;
  double speed = 0.0;
  std::vector<Lane> lanes;
  /// Half-open [begin, end) lane index ranges, one per robot.
  std::vector<std::pair<int, int>> robot_ranges;
  bool k_reduced = false;  // requested more robots than lanes

  std::size_t robots() const { return robot_ranges.size(); }
  /// Stitch each robot's lanes into a waypoint mission at the plan speed.
  std::vector<Mission> missions(double acceptance_radius = 3.0) const;
};

double lane_length(const Lane& lane);
/// Total connector distance for a directed lane sequence entered from start.
double transition_cost(std::span<const Lane> lanes, const LocalPoint& start);

/// Parallel sweep lanes at the given orientation, spaced `spacing`, clipped
/// to the polygon and connected in serpentine order. The first lane sits
/// spacing/2 inside the boundary extent; spacing wider than the region
/// degrades to a single mid-line lane.
CoveragePlan boustrophedon(const LakeRegion& region, double spacing,
                           double orientation_rad, double speed);

/// Longitudinal lanes parallel to the centerline at offsets centered about
/// zero (ceil(width/spacing) of them), serpentine at the corridor ends.
/// Minimizes turns: n - 1 for n lanes.
CoveragePlan l_cover(const RiverCorridor& corridor, double spacing, double speed);

/// Cross-sections perpendicular to the centerline every `spacing` meters of
/// arclength (both corridor ends always included), serpentine along the banks.
CoveragePlan t_cover(const RiverCorridor& corridor, double spacing, double speed);

/// Single-pass zigzag touching alternating banks every `along_spacing` of
/// arclength; monotone downstream progress.
CoveragePlan z_cover(const RiverCorridor& corridor, double along_spacing,
                     double speed);

/// Split a single-robot plan into k contiguous lane runs minimizing the
/// maximum per-robot path length (exact dynamic program over lane
/// boundaries). k beyond the lane count is reduced with a warning flag.
CoveragePlan split_path(const CoveragePlan& plan, int k);

/// Area partition: contiguous sweep bands balanced by lane length, assigned
/// to robots by exhaustive matching of band entries to start positions
/// (k <= 6; greedy nearest-start above that), each band serpentine-ordered
/// from its entry corner.
CoveragePlan partition_area(const LakeRegion& region, int k,
                            std::span<const LocalPoint> starts, double spacing,
                            double orientation_rad, double speed);

/// Order and direct a lane set to minimize transition distance:
/// nearest-neighbor construction (kept only if it beats the input order)
/// followed by 2-opt with direction flips until no improving move.
std::vector<Lane> order_lanes(std::vector<Lane> lanes, const LocalPoint& start);

/// Eight out-and-back single-waypoint missions at 45-degree increments from
/// `center`, leg length `radius`, at the given speed.
std::vector<Mission> star_pattern(const LocalPoint& center, double radius,
                                  double speed);

}  // namespace leeway
