#include "pedsafe/geodesy.hpp"

#include <cmath>
#include <string>

#include "pedsafe/error.hpp"

namespace pedsafe {

namespace {

constexpr double kMaxFrameOffsetDeg = 1.0;
constexpr double kMaxLocalOffsetMeters = 100'000.0;

void validate_frame(const FrameOrigin& frame) {
  validate_geo(frame.origin);
  if (!std::isfinite(frame.earth_radius) || frame.earth_radius <= 0.0) {
    throw ValidationError(ValidationCode::InvalidParams, "earth radius must be positive");
  }
}

}  // namespace

std::string_view to_string(ValidationCode code) {
  switch (code) {
    case ValidationCode::NonFinite: return "NonFinite";
    case ValidationCode::LatOutOfRange: return "LatOutOfRange";
    case ValidationCode::LonOutOfRange: return "LonOutOfRange";
    case ValidationCode::OutsideFrame: return "OutsideFrame";
    case ValidationCode::SingularFrame: return "SingularFrame";
    case ValidationCode::EmptyId: return "EmptyId";
    case ValidationCode::NegativeSpeed: return "NegativeSpeed";
    case ValidationCode::SpeedAboveCap: return "SpeedAboveCap";
    case ValidationCode::HeadingOutOfRange: return "HeadingOutOfRange";
    case ValidationCode::StampRegression: return "StampRegression";
    case ValidationCode::InvalidParams: return "InvalidParams";
    case ValidationCode::ClockSkew: return "ClockSkew";
    case ValidationCode::ContractViolation: return "ContractViolation";
  }
  return "Unknown";
}

double distance(const LocalPoint& a, const LocalPoint& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

void validate_geo(const GeoPoint& p) {
  if (!std::isfinite(p.lat) || !std::isfinite(p.lon)) {
    throw ValidationError(ValidationCode::NonFinite, "latitude/longitude must be finite");
  }
  if (p.lat < -90.0 || p.lat > 90.0) {
    throw ValidationError(ValidationCode::LatOutOfRange, "lat " + std::to_string(p.lat));
  }
  if (p.lon < -180.0 || p.lon > 180.0) {
    throw ValidationError(ValidationCode::LonOutOfRange, "lon " + std::to_string(p.lon));
  }
}

LocalPoint to_local(const GeoPoint& p, const FrameOrigin& frame) {
  validate_frame(frame);
  validate_geo(p);
  const double dlat = p.lat - frame.origin.lat;
  const double dlon = p.lon - frame.origin.lon;
  if (std::abs(dlat) >= kMaxFrameOffsetDeg || std::abs(dlon) >= kMaxFrameOffsetDeg) {
    throw ValidationError(ValidationCode::OutsideFrame, "point is more than 1 degree from the frame origin");
  }
  return {frame.earth_radius * deg_to_rad(dlon) * std::cos(deg_to_rad(frame.origin.lat)),
          frame.earth_radius * deg_to_rad(dlat)};
}

GeoPoint to_geo(const LocalPoint& p, const FrameOrigin& frame) {
  validate_frame(frame);
  if (std::abs(frame.origin.lat) == 90.0) {
    throw ValidationError(ValidationCode::SingularFrame, "frame origin at a pole");
  }
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
    throw ValidationError(ValidationCode::NonFinite, "local point must be finite");
  }
  if (std::abs(p.x) >= kMaxLocalOffsetMeters || std::abs(p.y) >= kMaxLocalOffsetMeters) {
    throw ValidationError(ValidationCode::OutsideFrame, "local offset beyond 100 km");
  }
  const double cos_lat = std::cos(deg_to_rad(frame.origin.lat));
  return {frame.origin.lat + rad_to_deg(p.y / frame.earth_radius),
          frame.origin.lon + rad_to_deg(p.x / (frame.earth_radius * cos_lat))};
}

double heading_to_theta(double heading_deg) {
  if (!std::isfinite(heading_deg)) {
    throw ValidationError(ValidationCode::NonFinite, "heading must be finite");
  }
  double h = std::fmod(heading_deg, 360.0);
  if (h < 0.0) h += 360.0;
  double theta = kPi / 2.0 - deg_to_rad(h);
  if (theta <= -kPi) theta += 2.0 * kPi;
  return theta;
}

double theta_to_heading(double theta) {
  if (!std::isfinite(theta)) {
    throw ValidationError(ValidationCode::NonFinite, "theta must be finite");
  }
  double h = std::fmod(90.0 - rad_to_deg(theta), 360.0);
  if (h < 0.0) h += 360.0;
  if (h >= 360.0) h -= 360.0;
  return h;
}

}  // namespace pedsafe
