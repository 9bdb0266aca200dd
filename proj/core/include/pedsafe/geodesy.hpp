#pragma once

namespace pedsafe {

struct GeoPoint {
  double lat = 0.0;  // degrees
  double lon = 0.0;  // degrees

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Planar point in meters; x east, y north of the frame origin.
struct LocalPoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const LocalPoint&, const LocalPoint&) = default;
};

inline constexpr double kEarthRadiusMeters = 6'371'000.0;

struct FrameOrigin {
  GeoPoint origin;
  double earth_radius = kEarthRadiusMeters;
};

inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

double distance(const LocalPoint& a, const LocalPoint& b);

/// Throws ValidationError unless lat/lon are finite and in range.
void validate_geo(const GeoPoint& p);

/// Equirectangular projection about the frame origin. Points farther than
/// one degree from the origin on either axis are rejected.
LocalPoint to_local(const GeoPoint& p, const FrameOrigin& frame);

/// Inverse of to_local. Rejects polar origins and offsets beyond 100 km.
GeoPoint to_geo(const LocalPoint& p, const FrameOrigin& frame);

/// Compass heading (degrees clockwise from North) to math angle in
/// (-pi, pi], zero pointing East and counterclockwise positive.
double heading_to_theta(double heading_deg);

/// Inverse of heading_to_theta; result in [0, 360).
double theta_to_heading(double theta);

}  // namespace pedsafe
