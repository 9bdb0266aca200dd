#include "pedsafe/model.hpp"

#include <cmath>
#include <string>

#include "pedsafe/error.hpp"

namespace pedsafe {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ValidationError(ValidationCode::InvalidParams, what);
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void EngineParams::validate() const {
  require(positive_finite(bubble_radius), "bubble_radius must be positive");
  require(bubble_radius >= kCdcMinimumDistanceMeters, "bubble_radius below the 6 ft floor");
  require(positive_finite(t_airborne), "t_airborne must be positive");
  require(positive_finite(c_start) && c_start <= 100.0, "c_start must be in (0, 100]");
  require(positive_finite(horizon), "horizon must be positive");
  require(positive_finite(horizon_step), "horizon_step must be positive");
  require(horizon_step <= horizon, "horizon_step exceeds horizon");
  require(positive_finite(update_period), "update_period must be positive");
  require(positive_finite(stale_timeout), "stale_timeout must be positive");
}

Circle bubble_of(const PedestrianState& s, const EngineParams& p) {
  return {s.position, p.bubble_radius};
}

bool circles_intersect(const Circle& a, const Circle& b) {
  return distance(a.center, b.center) <= a.radius + b.radius;
}

PedestrianState validate_state(const StateMessage& raw, const FrameOrigin& frame,
                               std::optional<Millis> previous_stamp) {
  if (raw.id.empty()) {
    throw ValidationError(ValidationCode::EmptyId, "id must be non-empty");
  }
  if (!std::isfinite(raw.speed_mps) || !std::isfinite(raw.heading_deg)) {
    throw ValidationError(ValidationCode::NonFinite, "speed/heading must be finite");
  }
  if (raw.speed_mps < 0.0) {
    throw ValidationError(ValidationCode::NegativeSpeed, "speed " + std::to_string(raw.speed_mps));
  }
  if (raw.speed_mps > kSpeedCapMps) {
    throw ValidationError(ValidationCode::SpeedAboveCap, "speed " + std::to_string(raw.speed_mps));
  }
  if (raw.heading_deg < 0.0 || raw.heading_deg >= 360.0) {
    throw ValidationError(ValidationCode::HeadingOutOfRange,
                          "heading " + std::to_string(raw.heading_deg));
  }
  if (previous_stamp && raw.t_ms < *previous_stamp) {
    throw ValidationError(ValidationCode::StampRegression,
                          raw.id + " stamp " + std::to_string(raw.t_ms) + " < " +
                              std::to_string(*previous_stamp));
  }

  const GeoPoint geo{raw.lat, raw.lon};
  PedestrianState s;
  s.id = raw.id;
  s.position = to_local(geo, frame);  // validates lat/lon
  s.geo = geo;
  s.speed = raw.speed_mps;
  s.theta = heading_to_theta(raw.heading_deg);
  s.healthy = raw.healthy;
  s.stamp = raw.t_ms;
  return s;
}

StateMessage to_message(const PedestrianState& s) {
  return {s.id, s.geo.lat, s.geo.lon, s.speed, theta_to_heading(s.theta), s.healthy, s.stamp};
}

}  // namespace pedsafe
