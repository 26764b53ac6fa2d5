#include "leeway/geo.hpp"

#include <string>

#include "leeway/error.hpp"

namespace leeway {

namespace {

constexpr double kDegToRad = kPi / 180.0;
constexpr double kRadToDeg = 180.0 / kPi;
// Projection validity guard for local coordinates.
constexpr double kMaxLocalMagnitudeM = 1e7;

void check_geo(const GeoPoint& p, const char* what) {
  if (!(p.lat >= -90.0 && p.lat <= 90.0))
    throw DomainError(std::string(what) + ".lat out of range [-90, 90]: " +
                      std::to_string(p.lat));
  if (!(p.lon >= -180.0 && p.lon <= 180.0))
    throw DomainError(std::string(what) + ".lon out of range [-180, 180]: " +
                      std::to_string(p.lon));
}

}  // namespace

double wrap_angle(double rad) {
  double a = std::fmod(rad, 2.0 * kPi);
  if (a <= -kPi)
    a += 2.0 * kPi;
  else if (a > kPi)
    a -= 2.0 * kPi;
  return a;
}

double compass_deg_to_math_rad(double compass_deg) {
  return wrap_angle(kPi / 2.0 - compass_deg * kDegToRad);
}

double math_rad_to_compass_deg(double math_rad) {
  double deg = 90.0 - math_rad * kRadToDeg;
  deg = std::fmod(deg, 360.0);
  if (deg < 0.0) deg += 360.0;
  return deg;
}

LocalPoint to_local(const Frame& frame, const GeoPoint& p) {
  check_geo(frame.origin, "frame.origin");
  check_geo(p, "point");
  const double dlat = p.lat - frame.origin.lat;
  const double dlon = p.lon - frame.origin.lon;
  if (std::abs(dlat) >= 1.0)
    throw DomainError("point.lat farther than 1 degree from frame origin");
  if (std::abs(dlon) >= 1.0)
    throw DomainError("point.lon farther than 1 degree from frame origin");
  const double cos_lat0 = std::cos(frame.origin.lat * kDegToRad);
  if (cos_lat0 < 1e-6)
    throw DomainError("frame.origin too close to a pole for a local frame");
  return {frame.earth_radius * cos_lat0 * dlon * kDegToRad,
          frame.earth_radius * dlat * kDegToRad};
}

GeoPoint from_local(const Frame& frame, const LocalPoint& p) {
  check_geo(frame.origin, "frame.origin");
  if (!p.finite())
    throw DomainError("local point is not finite");
  if (p.norm() >= kMaxLocalMagnitudeM)
    throw DomainError("local point exceeds projection validity bound");
  const double cos_lat0 = std::cos(frame.origin.lat * kDegToRad);
  if (cos_lat0 < 1e-6)
    throw DomainError("frame.origin too close to a pole for a local frame");
  return {frame.origin.lat + (p.y / frame.earth_radius) * kRadToDeg,
          frame.origin.lon + (p.x / (frame.earth_radius * cos_lat0)) * kRadToDeg};
}

double cross_track(const LocalPoint& p, const LocalPoint& a, const LocalPoint& b) {
  const Vec2 d = b - a;
  const double len = d.norm();
  if (len <= 1e-9)
    throw DomainError("cross_track: degenerate segment (|b-a| <= 1e-9)");
  // 2-D cross product of the travel direction with a->p; positive = left.
  return d.cross(p - a) / len;
}

}  // namespace leeway
