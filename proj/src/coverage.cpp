#include "leeway/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "leeway/error.hpp"

namespace leeway {

namespace {

bool segments_intersect(const LocalPoint& a, const LocalPoint& b,
                        const LocalPoint& c, const LocalPoint& d) {
  auto orient = [](const LocalPoint& p, const LocalPoint& q, const LocalPoint& r) {
    const double v = (q - p).cross(r - p);
    if (v > 1e-12) return 1;
    if (v < -1e-12) return -1;
    return 0;
  };
  const int o1 = orient(a, b, c), o2 = orient(a, b, d);
  const int o3 = orient(c, d, a), o4 = orient(c, d, b);
  return o1 != o2 && o3 != o4;
}

Lane reversed(Lane lane) {
  std::reverse(lane.begin(), lane.end());
  return lane;
}

}  // namespace

double LakeRegion::area() const {
  double twice = 0.0;
  const std::size_t n = boundary.size();
  for (std::size_t i = 0; i < n; ++i)
    twice += boundary[i].cross(boundary[(i + 1) % n]);
  return 0.5 * twice;
}

void LakeRegion::validate() const {
  if (boundary.size() < 3)
    throw DomainError("LakeRegion: polygon needs >= 3 vertices");
  for (const auto& p : boundary)
    if (!p.finite()) throw DomainError("LakeRegion: non-finite vertex");
  if (!(area() > 0.0))
    throw DomainError("LakeRegion: boundary must be CCW with positive area");
  const std::size_t n = boundary.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // skip edges sharing a vertex
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_intersect(boundary[i], boundary[(i + 1) % n], boundary[j],
                             boundary[(j + 1) % n]))
        throw DomainError("LakeRegion: boundary self-intersects");
    }
  }
}

void RiverCorridor::validate() const {
  if (centerline.size() < 2)
    throw DomainError("RiverCorridor: centerline needs >= 2 vertices");
  if (!(width > 0.0)) throw DomainError("RiverCorridor: width must be > 0");
  for (std::size_t i = 0; i + 1 < centerline.size(); ++i)
    if (distance(centerline[i], centerline[i + 1]) < 1e-9)
      throw DomainError("RiverCorridor: consecutive centerline points coincide");
}

double RiverCorridor::length() const {
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < centerline.size(); ++i)
    len += distance(centerline[i], centerline[i + 1]);
  return len;
}

void RiverCorridor::at_station(double s, LocalPoint& point, Vec2& tangent,
                               Vec2& normal) const {
  double remaining = std::max(0.0, s);
  for (std::size_t i = 0; i + 1 < centerline.size(); ++i) {
    const Vec2 seg = centerline[i + 1] - centerline[i];
    const double len = seg.norm();
    if (remaining <= len || i + 2 == centerline.size()) {
      tangent = seg / len;
      normal = tangent.perp();
      point = centerline[i] + tangent * std::min(remaining, len);
      return;
    }
    remaining -= len;
  }
  // single-segment fallback (validate() guarantees >= 2 vertices)
  tangent = (centerline[1] - centerline[0]) / distance(centerline[0], centerline[1]);
  normal = tangent.perp();
  point = centerline[0];
}

const char* pattern_name(PatternKind p) {
  switch (p) {
    case PatternKind::boustrophedon: return "boustrophedon";
    case PatternKind::l_cover: return "l";
    case PatternKind::t_cover: return "t";
    case PatternKind::z_cover: return "z";
    case PatternKind::star: return "star";
  }
  return "?";
}

double lane_length(const Lane& lane) {
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < lane.size(); ++i)
    len += distance(lane[i], lane[i + 1]);
  return len;
}

double transition_cost(std::span<const Lane> lanes, const LocalPoint& start) {
  if (lanes.empty()) return 0.0;
  double cost = distance(start, lanes.front().front());
  for (std::size_t i = 0; i + 1 < lanes.size(); ++i)
    cost += distance(lanes[i].back(), lanes[i + 1].front());
  return cost;
}

std::vector<Mission> CoveragePlan::missions(double acceptance_radius) const {
  std::vector<Mission> out;
  out.reserve(robot_ranges.size());
  for (const auto& [begin, end] : robot_ranges) {
    Mission m;
    m.acceptance_radius = acceptance_radius;
    for (int li = begin; li < end; ++li)
      for (const auto& p : lanes[static_cast<std::size_t>(li)])
        m.waypoints.push_back({p, speed});
    // drop consecutive duplicates introduced by touching lane ends
    auto last = std::unique(m.waypoints.begin(), m.waypoints.end(),
                            [](const Waypoint& a, const Waypoint& b) {
                              return distance(a.position, b.position) < 1e-9;
                            });
    m.waypoints.erase(last, m.waypoints.end());
    out.push_back(std::move(m));
  }
  return out;
}

// ---------------------------------------------------------------------------
// boustrophedon

namespace {

/// Intervals of the horizontal line y = yline inside the polygon (even-odd
/// rule, half-open vertex handling).
std::vector<std::pair<double, double>> clip_scanline(
    const std::vector<LocalPoint>& poly, double yline) {
  std::vector<double> xs;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const LocalPoint& p = poly[i];
    const LocalPoint& q = poly[(i + 1) % n];
    if ((p.y <= yline && q.y > yline) || (q.y <= yline && p.y > yline)) {
      const double t = (yline - p.y) / (q.y - p.y);
      xs.push_back(p.x + t * (q.x - p.x));
    }
  }
  std::sort(xs.begin(), xs.end());
  std::vector<std::pair<double, double>> intervals;
  for (std::size_t i = 0; i + 1 < xs.size(); i += 2)
    if (xs[i + 1] - xs[i] > 1e-9) intervals.emplace_back(xs[i], xs[i + 1]);
  return intervals;
}

}  // namespace

CoveragePlan boustrophedon(const LakeRegion& region, double spacing,
                           double orientation_rad, double speed) {
  region.validate();
  if (!(spacing > 0.0)) throw DomainError("boustrophedon: spacing must be > 0");

  // canonical frame: rotate so sweep lanes are parallel to +x
  std::vector<LocalPoint> poly;
  poly.reserve(region.boundary.size());
  for (const auto& p : region.boundary) poly.push_back(p.rotated(-orientation_rad));

  double ymin = poly.front().y, ymax = ymin;
  for (const auto& p : poly) {
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double extent = ymax - ymin;

  std::vector<double> lines;
  if (extent <= spacing) {
    lines.push_back(0.5 * (ymin + ymax));
  } else {
    for (double y = ymin + 0.5 * spacing; y < ymax - 1e-9; y += spacing)
      lines.push_back(y);
  }

  CoveragePlan plan;
  plan.pattern = PatternKind::boustrophedon;
  plan.lane_spacing = spacing;
  plan.speed = speed;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    auto intervals = clip_scanline(poly, lines[li]);
    const bool forward = (li % 2 == 0);
    if (!forward) std::reverse(intervals.begin(), intervals.end());
    for (const auto& [x0, x1] : intervals) {
      Lane lane;
      if (forward)
        lane = {{x0, lines[li]}, {x1, lines[li]}};
      else
        lane = {{x1, lines[li]}, {x0, lines[li]}};
      for (auto& p : lane) p = p.rotated(orientation_rad);
      plan.lanes.push_back(std::move(lane));
    }
  }
  if (plan.lanes.empty())
    throw DomainError("boustrophedon: no lanes intersect the region");
  plan.robot_ranges = {{0, static_cast<int>(plan.lanes.size())}};
  return plan;
}

// ---------------------------------------------------------------------------
// river patterns

CoveragePlan l_cover(const RiverCorridor& corridor, double spacing, double speed) {
  corridor.validate();
  if (!(spacing > 0.0)) throw DomainError("l_cover: spacing must be > 0");

  int n = (spacing >= corridor.width)
              ? 1
              : static_cast<int>(std::ceil(corridor.width / spacing - 1e-9));

  // constant-offset parallels of the centerline, averaged vertex normals
  const auto& cl = corridor.centerline;
  std::vector<Vec2> vertex_normals(cl.size());
  for (std::size_t i = 0; i < cl.size(); ++i) {
    Vec2 acc{0.0, 0.0};
    if (i > 0) {
      const Vec2 d = cl[i] - cl[i - 1];
      acc += d.perp() / d.norm();
    }
    if (i + 1 < cl.size()) {
      const Vec2 d = cl[i + 1] - cl[i];
      acc += d.perp() / d.norm();
    }
    vertex_normals[i] = acc / acc.norm();
  }

  CoveragePlan plan;
  plan.pattern = PatternKind::l_cover;
  plan.lane_spacing = spacing;
  plan.speed = speed;
  for (int j = 0; j < n; ++j) {
    const double offset = (j - 0.5 * (n - 1)) * spacing;
    Lane lane;
    lane.reserve(cl.size());
    for (std::size_t i = 0; i < cl.size(); ++i)
      lane.push_back(cl[i] + vertex_normals[i] * offset);
    if (j % 2 == 1) lane = reversed(std::move(lane));
    plan.lanes.push_back(std::move(lane));
  }
  plan.robot_ranges = {{0, static_cast<int>(plan.lanes.size())}};
  return plan;
}

namespace {

std::vector<double> arclength_stations(double total, double spacing) {
  std::vector<double> stations;
  for (double s = 0.0; s < total - 1e-9; s += spacing) stations.push_back(s);
  stations.push_back(total);
  return stations;
}

}  // namespace

CoveragePlan t_cover(const RiverCorridor& corridor, double spacing, double speed) {
  corridor.validate();
  if (!(spacing > 0.0)) throw DomainError("t_cover: spacing must be > 0");

  CoveragePlan plan;
  plan.pattern = PatternKind::t_cover;
  plan.lane_spacing = spacing;
  plan.speed = speed;

  const auto stations = arclength_stations(corridor.length(), spacing);
  const double half = 0.5 * corridor.width;
  for (std::size_t i = 0; i < stations.size(); ++i) {
    LocalPoint p;
    Vec2 tangent, normal;
    corridor.at_station(stations[i], p, tangent, normal);
    const LocalPoint left = p + normal * half;
    const LocalPoint right = p - normal * half;
    plan.lanes.push_back((i % 2 == 0) ? Lane{left, right} : Lane{right, left});
  }
  plan.robot_ranges = {{0, static_cast<int>(plan.lanes.size())}};
  return plan;
}

CoveragePlan z_cover(const RiverCorridor& corridor, double along_spacing,
                     double speed) {
  corridor.validate();
  if (!(along_spacing > 0.0))
    throw DomainError("z_cover: along_spacing must be > 0");

  CoveragePlan plan;
  plan.pattern = PatternKind::z_cover;
  plan.lane_spacing = along_spacing;
  plan.speed = speed;

  const auto stations = arclength_stations(corridor.length(), along_spacing);
  const double half = 0.5 * corridor.width;
  Lane zigzag;
  zigzag.reserve(stations.size());
  for (std::size_t i = 0; i < stations.size(); ++i) {
    LocalPoint p;
    Vec2 tangent, normal;
    corridor.at_station(stations[i], p, tangent, normal);
    zigzag.push_back(p + normal * (i % 2 == 0 ? half : -half));
  }
  plan.lanes.push_back(std::move(zigzag));
  plan.robot_ranges = {{0, 1}};
  return plan;
}

// ---------------------------------------------------------------------------
// multi-robot

namespace {

/// Exact min-max contiguous partition of lane costs into k runs.
/// run cost = lane lengths + connector transitions inside the run.
/// Returns the k-1 split points (indices where a new run begins).
std::vector<int> minmax_partition(const std::vector<Lane>& lanes, int k,
                                  bool include_transitions) {
  const int n = static_cast<int>(lanes.size());
  std::vector<double> len(n);
  for (int i = 0; i < n; ++i) len[i] = lane_length(lanes[static_cast<std::size_t>(i)]);
  std::vector<double> trans(std::max(0, n - 1), 0.0);
  if (include_transitions)
    for (int i = 0; i + 1 < n; ++i)
      trans[i] = distance(lanes[static_cast<std::size_t>(i)].back(),
                          lanes[static_cast<std::size_t>(i) + 1].front());

  auto run_cost = [&](int i, int j) {  // lanes [i, j] inclusive
    double c = 0.0;
    for (int t = i; t <= j; ++t) c += len[t];
    if (include_transitions)
      for (int t = i; t < j; ++t) c += trans[t];
    return c;
  };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // dp[r][j]: min over partitions of lanes [0, j] into r runs of the max run
  std::vector<std::vector<double>> dp(static_cast<std::size_t>(k) + 1,
                                      std::vector<double>(static_cast<std::size_t>(n), kInf));
  std::vector<std::vector<int>> cut(static_cast<std::size_t>(k) + 1,
                                    std::vector<int>(static_cast<std::size_t>(n), -1));
  for (int j = 0; j < n; ++j) dp[1][static_cast<std::size_t>(j)] = run_cost(0, j);
  for (int r = 2; r <= k; ++r) {
    for (int j = r - 1; j < n; ++j) {
      for (int i = r - 2; i < j; ++i) {  // last run = [i+1, j]
        const double v = std::max(dp[static_cast<std::size_t>(r) - 1][static_cast<std::size_t>(i)],
                                  run_cost(i + 1, j));
        if (v < dp[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)]) {
          dp[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] = v;
          cut[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] = i;
        }
      }
    }
  }

  std::vector<int> splits;
  int j = n - 1;
  for (int r = k; r >= 2; --r) {
    const int i = cut[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
    splits.push_back(i + 1);
    j = i;
  }
  std::sort(splits.begin(), splits.end());
  return splits;
}

}  // namespace

CoveragePlan split_path(const CoveragePlan& plan, int k) {
  if (k < 1) throw DomainError("split_path: k must be >= 1");
  if (plan.robot_ranges.size() != 1)
    throw DomainError("split_path: expects a single-robot plan");

  CoveragePlan out = plan;
  out.k_reduced = false;
  const int n = static_cast<int>(plan.lanes.size());
  if (k > n) {
    out.k_reduced = true;
    k = n;
  }
  if (k == 1) {
    out.robot_ranges = {{0, n}};
    return out;
  }

  const auto splits = minmax_partition(plan.lanes, k, /*include_transitions=*/true);
  out.robot_ranges.clear();
  int begin = 0;
  for (int s : splits) {
    out.robot_ranges.emplace_back(begin, s);
    begin = s;
  }
  out.robot_ranges.emplace_back(begin, n);
  return out;
}

namespace {

struct BandEntry {
  bool from_last_lane;  // enter at the band's last sweep lane (reversed order)
  bool from_far_end;    // enter at the lane's stored far end
  LocalPoint corner;
};

std::vector<BandEntry> band_entries(const std::vector<Lane>& lanes, int begin,
                                    int end) {
  const Lane& first = lanes[static_cast<std::size_t>(begin)];
  const Lane& last = lanes[static_cast<std::size_t>(end) - 1];
  return {{false, false, first.front()},
          {false, true, first.back()},
          {true, false, last.front()},
          {true, true, last.back()}};
}

/// Serpentine-order a band's lanes starting from the chosen entry.
std::vector<Lane> orient_band(const std::vector<Lane>& lanes, int begin, int end,
                              const BandEntry& entry) {
  std::vector<Lane> band;
  for (int i = begin; i < end; ++i) band.push_back(lanes[static_cast<std::size_t>(i)]);
  if (entry.from_last_lane) std::reverse(band.begin(), band.end());
  bool reverse_lane = entry.from_far_end;
  for (auto& lane : band) {
    if (reverse_lane) lane = reversed(std::move(lane));
    reverse_lane = !reverse_lane;
  }
  return band;
}

}  // namespace

CoveragePlan partition_area(const LakeRegion& region, int k,
                            std::span<const LocalPoint> starts, double spacing,
                            double orientation_rad, double speed) {
  if (k < 1 || static_cast<std::size_t>(k) != starts.size())
    throw DomainError("partition_area: k must equal the number of starts");

  CoveragePlan base = boustrophedon(region, spacing, orientation_rad, speed);
  const int n = static_cast<int>(base.lanes.size());
  CoveragePlan out = base;
  out.k_reduced = false;
  if (k > n) {
    out.k_reduced = true;
    k = n;
  }

  // contiguous bands of the sweep axis balanced by lane length
  std::vector<std::pair<int, int>> bands;
  if (k == 1) {
    bands = {{0, n}};
  } else {
    const auto splits = minmax_partition(base.lanes, k, /*include_transitions=*/false);
    int begin = 0;
    for (int s : splits) {
      bands.emplace_back(begin, s);
      begin = s;
    }
    bands.emplace_back(begin, n);
  }

  // assign bands to robots minimizing total start-to-entry distance
  std::vector<std::vector<double>> cost(static_cast<std::size_t>(k),
                                        std::vector<double>(static_cast<std::size_t>(k)));
  std::vector<std::vector<BandEntry>> best_entry(
      static_cast<std::size_t>(k), std::vector<BandEntry>(static_cast<std::size_t>(k)));
  for (int r = 0; r < k; ++r) {
    for (int b = 0; b < k; ++b) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& e :
           band_entries(base.lanes, bands[static_cast<std::size_t>(b)].first,
                        bands[static_cast<std::size_t>(b)].second)) {
        const double d = distance(starts[static_cast<std::size_t>(r)], e.corner);
        if (d < best) {
          best = d;
          best_entry[static_cast<std::size_t>(r)][static_cast<std::size_t>(b)] = e;
        }
      }
      cost[static_cast<std::size_t>(r)][static_cast<std::size_t>(b)] = best;
    }
  }

  std::vector<int> assignment(static_cast<std::size_t>(k));
  std::iota(assignment.begin(), assignment.end(), 0);
  if (k <= 6) {
    // exhaustive over k! permutations, lexicographic order breaks ties
    std::vector<int> perm = assignment;
    double best = std::numeric_limits<double>::infinity();
    do {
      double total = 0.0;
      for (int r = 0; r < k; ++r)
        total += cost[static_cast<std::size_t>(r)][static_cast<std::size_t>(perm[static_cast<std::size_t>(r)])];
      if (total < best) {
        best = total;
        assignment = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    // greedy nearest-start fallback, robots in index order
    std::vector<bool> taken(static_cast<std::size_t>(k), false);
    for (int r = 0; r < k; ++r) {
      int pick = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int b = 0; b < k; ++b)
        if (!taken[static_cast<std::size_t>(b)] &&
            cost[static_cast<std::size_t>(r)][static_cast<std::size_t>(b)] < best) {
          best = cost[static_cast<std::size_t>(r)][static_cast<std::size_t>(b)];
          pick = b;
        }
      assignment[static_cast<std::size_t>(r)] = pick;
      taken[static_cast<std::size_t>(pick)] = true;
    }
  }

  out.lanes.clear();
  out.robot_ranges.clear();
  for (int r = 0; r < k; ++r) {
    const int b = assignment[static_cast<std::size_t>(r)];
    const auto& entry = best_entry[static_cast<std::size_t>(r)][static_cast<std::size_t>(b)];
    auto band = orient_band(base.lanes, bands[static_cast<std::size_t>(b)].first,
                            bands[static_cast<std::size_t>(b)].second, entry);
    const int begin = static_cast<int>(out.lanes.size());
    for (auto& lane : band) out.lanes.push_back(std::move(lane));
    out.robot_ranges.emplace_back(begin, static_cast<int>(out.lanes.size()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// lane ordering

namespace {

double sequence_cost(const std::vector<Lane>& lanes, const LocalPoint& start) {
  return transition_cost(lanes, start);
}

std::vector<Lane> nearest_neighbor(std::vector<Lane> lanes,
                                   const LocalPoint& start) {
  std::vector<Lane> ordered;
  LocalPoint pos = start;
  while (!lanes.empty()) {
    std::size_t best_i = 0;
    bool best_rev = false;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lanes.size(); ++i) {
      const double d_front = distance(pos, lanes[i].front());
      const double d_back = distance(pos, lanes[i].back());
      if (d_front < best_d) {
        best_d = d_front;
        best_i = i;
        best_rev = false;
      }
      if (d_back < best_d) {
        best_d = d_back;
        best_i = i;
        best_rev = true;
      }
    }
    Lane lane = std::move(lanes[best_i]);
    lanes.erase(lanes.begin() + static_cast<std::ptrdiff_t>(best_i));
    if (best_rev) lane = reversed(std::move(lane));
    pos = lane.back();
    ordered.push_back(std::move(lane));
  }
  return ordered;
}

/// Best-improvement local search: 2-opt segment reversals (which also flip
/// lane directions) plus single-lane direction flips, to a fixpoint.
void improve_2opt(std::vector<Lane>& lanes, const LocalPoint& start) {
  const std::size_t n = lanes.size();
  if (n < 2) {
    if (n == 1 && distance(start, lanes[0].back()) < distance(start, lanes[0].front()))
      lanes[0] = reversed(std::move(lanes[0]));
    return;
  }
  bool improved = true;
  while (improved) {
    improved = false;
    double best_gain = 1e-9;
    enum class Move { none, reverse_span, flip_one } move = Move::none;
    std::size_t mi = 0, mj = 0;
    const double base = sequence_cost(lanes, start);

    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        std::vector<Lane> trial = lanes;
        std::reverse(trial.begin() + static_cast<std::ptrdiff_t>(i),
                     trial.begin() + static_cast<std::ptrdiff_t>(j) + 1);
        for (std::size_t t = i; t <= j; ++t) trial[t] = reversed(std::move(trial[t]));
        const double gain = base - sequence_cost(trial, start);
        if (gain > best_gain) {
          best_gain = gain;
          move = Move::reverse_span;
          mi = i;
          mj = j;
        }
      }
      std::vector<Lane> trial = lanes;
      trial[i] = reversed(std::move(trial[i]));
      const double gain = base - sequence_cost(trial, start);
      if (gain > best_gain) {
        best_gain = gain;
        move = Move::flip_one;
        mi = i;
      }
    }

    if (move == Move::reverse_span) {
      std::reverse(lanes.begin() + static_cast<std::ptrdiff_t>(mi),
                   lanes.begin() + static_cast<std::ptrdiff_t>(mj) + 1);
      for (std::size_t t = mi; t <= mj; ++t) lanes[t] = reversed(std::move(lanes[t]));
      improved = true;
    } else if (move == Move::flip_one) {
      lanes[mi] = reversed(std::move(lanes[mi]));
      improved = true;
    }
  }
}

}  // namespace

std::vector<Lane> order_lanes(std::vector<Lane> lanes, const LocalPoint& start) {
  if (lanes.empty()) throw DomainError("order_lanes: empty lane set");

  std::vector<Lane> candidate = nearest_neighbor(lanes, start);
  // never worsen the caller's order
  if (sequence_cost(candidate, start) > sequence_cost(lanes, start))
    candidate = std::move(lanes);
  improve_2opt(candidate, start);
  return candidate;
}

// ---------------------------------------------------------------------------
// star pattern

std::vector<Mission> star_pattern(const LocalPoint& center, double radius,
                                  double speed) {
  if (!(radius > 0.0)) throw DomainError("star_pattern: radius must be > 0");
  std::vector<Mission> missions;
  missions.reserve(8);
  for (int i = 0; i < 8; ++i) {
    const double heading = i * (kPi / 4.0);
    const LocalPoint out =
        center + Vec2{radius * std::cos(heading), radius * std::sin(heading)};
    Mission m;
    m.waypoints = {{out, speed}, {center, speed}};
    missions.push_back(std::move(m));
  }
  return missions;
}

}  // namespace leeway
