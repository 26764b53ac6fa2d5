#pragma once

#include <cmath>

namespace leeway {

/// Mean earth radius (m) used by the local equirectangular projection.
inline constexpr double kEarthRadiusM = 6371008.8;

inline constexpr double kPi = 3.14159265358979323846;

/// 2-D vector in the local east/north frame. Doubles as a position
/// (meters from the frame origin) and as a velocity or force (m/s).
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double squared_norm() const { return x * x + y * y; }
  /// 90 degrees counter-clockwise (the "left of travel" direction).
  Vec2 perp() const { return {-y, x}; }
  Vec2 rotated(double angle_rad) const {
    const double c = std::cos(angle_rad), s = std::sin(angle_rad);
    return {c * x - s * y, s * x + c * y};
  }
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

inline double distance(const Vec2& a, const Vec2& b) { return (b - a).norm(); }

/// Position in meters east/north of a Frame origin.
using LocalPoint = Vec2;

/// WGS-84 position in degrees.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;
};

/// Local tangent frame anchored at a geographic origin.
struct Frame {
  GeoPoint origin;
  double earth_radius = kEarthRadiusM;
};

/// Position plus heading. Heading is radians counter-clockwise from +x
/// (east), normalized to (-pi, pi]. File I/O uses compass degrees instead.
struct Pose {
  LocalPoint position;
  double heading = 0.0;
};

/// Normalize an angle to (-pi, pi]. Idempotent; theta + 2*pi maps to theta.
double wrap_angle(double rad);

/// Compass degrees (clockwise from north) -> math radians (CCW from east).
double compass_deg_to_math_rad(double compass_deg);

/// Math radians (CCW from east) -> compass degrees in [0, 360).
double math_rad_to_compass_deg(double math_rad);

/// Equirectangular projection about the frame origin.
/// x = R*cos(lat0)*dlon, y = R*dlat. Valid for small survey areas
/// (|dlat|, |dlon| < 1 degree enforced).
LocalPoint to_local(const Frame& frame, const GeoPoint& p);

/// Exact algebraic inverse of to_local.
GeoPoint from_local(const Frame& frame, const LocalPoint& p);

/// Signed perpendicular distance (m) of p from the infinite line a->b.
/// Positive when p lies left of the direction of travel.
double cross_track(const LocalPoint& p, const LocalPoint& a, const LocalPoint& b);

}  // namespace leeway
