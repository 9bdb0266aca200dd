#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pedsafe/contamination.hpp"
#include "pedsafe/model.hpp"

namespace pedsafe {

struct Velocity {
  double vx = 0.0;  // m/s east
  double vy = 0.0;  // m/s north
};

enum class WarningLevel { AreaSafe, RedZonePredicted, InRedZone };

enum class AlertPattern { None, Intermittent, Continuous };

std::string_view to_string(WarningLevel level);
std::string_view to_string(AlertPattern pattern);
std::optional<WarningLevel> parse_warning_level(std::string_view text);

/// Classifier output. `cause` is set unless the area is safe;
/// `time_to_contact` only for RedZonePredicted.
struct WarningState {
  WarningLevel level = WarningLevel::AreaSafe;
  std::optional<RedZone> cause;
  std::optional<double> time_to_contact;

  friend bool operator==(const WarningState&, const WarningState&) = default;
};

Velocity velocity_components(double speed, double theta);

/// Constant-velocity extrapolation: position + velocity * dt.
LocalPoint predict_position(const PedestrianState& s, double dt);

/// Look-ahead offsets sampled by classify: step, 2*step, ..., horizon.
std::vector<double> horizon_samples(const EngineParams& p);

/// Current overlap wins over a predicted one, which wins over safe.
/// Ties resolve by smallest offset, then smallest center distance, then
/// zone order.
WarningState classify(const PedestrianState& s, std::span<const RedZone> zones,
                      const EngineParams& p);

AlertPattern alert_signal(const WarningState& w);

}  // namespace pedsafe
