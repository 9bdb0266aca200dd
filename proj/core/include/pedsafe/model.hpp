#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "pedsafe/geodesy.hpp"

namespace pedsafe {

/// Milliseconds since the session epoch.
using Millis = std::int64_t;

inline constexpr double kSpeedCapMps = 15.0;
inline constexpr double kCdcMinimumDistanceMeters = 1.8288;  // 6 ft

/// Which linear decay curve the contamination field follows.
enum class DecayLaw {
  /// C(t) = C_start * (1 - t / t_airborne); reaches zero at t_airborne.
  LinearToZero,
  /// C(t) = C_start - 100 / (C_start * t_airborne) * t; at C_start = 100 it
  /// clears after 100 * t_airborne.
  ScaledSlope,
};

struct EngineParams {
  double bubble_radius = 9.144;  // 30 ft
  double t_airborne = 10'800.0;  // seconds; demo scenarios use 6
  double c_start = 100.0;        // percent
  double horizon = 3.0;          // seconds of look-ahead
  double horizon_step = 0.5;
  double update_period = 1.0;
  double stale_timeout = 5.0;
  DecayLaw decay_law = DecayLaw::LinearToZero;

  /// Throws ValidationError(InvalidParams) on any broken invariant.
  void validate() const;

  friend bool operator==(const EngineParams&, const EngineParams&) = default;
};

struct Circle {
  LocalPoint center;
  double radius = 0.0;

  friend bool operator==(const Circle&, const Circle&) = default;
};

struct PedestrianState {
  std::string id;
  LocalPoint position;
  GeoPoint geo;
  double speed = 0.0;  // m/s
  double theta = 0.0;  // radians, (-pi, pi]
  bool healthy = true;
  Millis stamp = 0;

  friend bool operator==(const PedestrianState&, const PedestrianState&) = default;
};

/// Decoded wire fields of a "state" message.
struct StateMessage {
  std::string id;
  double lat = 0.0;
  double lon = 0.0;
  double speed_mps = 0.0;
  double heading_deg = 0.0;
  bool healthy = true;
  Millis t_ms = 0;

  friend bool operator==(const StateMessage&, const StateMessage&) = default;
};

Circle bubble_of(const PedestrianState& s, const EngineParams& p);

/// Tangent circles count as intersecting.
bool circles_intersect(const Circle& a, const Circle& b);

/// Range-checks a decoded message and lifts it into the local frame.
/// `previous_stamp` is the last accepted stamp for the same id, if any;
/// an older stamp is rejected with StampRegression.
PedestrianState validate_state(const StateMessage& raw, const FrameOrigin& frame,
                               std::optional<Millis> previous_stamp = std::nullopt);

/// Wire view of a validated state (heading back in compass degrees).
StateMessage to_message(const PedestrianState& s);

}  // namespace pedsafe
