#include "pedsafe/prediction.hpp"

#include <cmath>
#include <limits>

#include "pedsafe/error.hpp"

namespace pedsafe {

namespace {

/// Index of the intersecting zone nearest to `bubble`, or -1.
std::ptrdiff_t nearest_hit(const Circle& bubble, std::span<const RedZone> zones) {
  std::ptrdiff_t best = -1;
  double best_distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < zones.size(); ++i) {
    if (!circles_intersect(bubble, zones[i].area)) continue;
    const double d = distance(bubble.center, zones[i].area.center);
    if (d < best_distance) {
      best_distance = d;
      best = static_cast<std::ptrdiff_t>(i);
    }
  }
  return best;
}

}  // namespace

std::string_view to_string(WarningLevel level) {
  switch (level) {
    case WarningLevel::AreaSafe: return "AreaSafe";
    case WarningLevel::RedZonePredicted: return "RedZonePredicted";
    case WarningLevel::InRedZone: return "InRedZone";
  }
  return "AreaSafe";
}

std::string_view to_string(AlertPattern pattern) {
  switch (pattern) {
    case AlertPattern::None: return "None";
    case AlertPattern::Intermittent: return "Intermittent";
    case AlertPattern::Continuous: return "Continuous";
  }
  return "None";
}

std::optional<WarningLevel> parse_warning_level(std::string_view text) {
  if (text == "AreaSafe") return WarningLevel::AreaSafe;
  if (text == "RedZonePredicted") return WarningLevel::RedZonePredicted;
  if (text == "InRedZone") return WarningLevel::InRedZone;
  return std::nullopt;
}

Velocity velocity_components(double speed, double theta) {
  return {speed * std::cos(theta), speed * std::sin(theta)};
}

LocalPoint predict_position(const PedestrianState& s, double dt) {
  if (!(dt >= 0.0)) {
    throw ValidationError(ValidationCode::ContractViolation, "prediction offset must be >= 0");
  }
  const Velocity v = velocity_components(s.speed, s.theta);
  return {s.position.x + v.vx * dt, s.position.y + v.vy * dt};
}

std::vector<double> horizon_samples(const EngineParams& p) {
  std::vector<double> out;
  const auto steps = static_cast<int>(std::floor(p.horizon / p.horizon_step + 1e-9));
  for (int k = 1; k <= steps; ++k) out.push_back(k * p.horizon_step);
  if (out.empty() || p.horizon - out.back() > 1e-9) out.push_back(p.horizon);
  return out;
}

WarningState classify(const PedestrianState& s, std::span<const RedZone> zones,
                      const EngineParams& p) {
  if (zones.empty()) return {};

  if (auto hit = nearest_hit(bubble_of(s, p), zones); hit >= 0) {
    return {WarningLevel::InRedZone, zones[static_cast<std::size_t>(hit)], std::nullopt};
  }

  for (double dt : horizon_samples(p)) {
    const Circle ahead{predict_position(s, dt), p.bubble_radius};
    if (auto hit = nearest_hit(ahead, zones); hit >= 0) {
      return {WarningLevel::RedZonePredicted, zones[static_cast<std::size_t>(hit)], dt};
    }
  }
  return {};
}

AlertPattern alert_signal(const WarningState& w) {
  switch (w.level) {
    case WarningLevel::AreaSafe: return AlertPattern::None;
    case WarningLevel::RedZonePredicted: return AlertPattern::Intermittent;
    case WarningLevel::InRedZone: return AlertPattern::Continuous;
  }
  return AlertPattern::None;
}

}  // namespace pedsafe
