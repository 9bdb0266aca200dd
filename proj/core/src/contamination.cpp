#include "pedsafe/contamination.hpp"

#include <algorithm>

#include "pedsafe/error.hpp"

namespace pedsafe {

std::string_view to_string(ZoneKind kind) {
  return kind == ZoneKind::LivePedestrian ? "LivePedestrian" : "Trail";
}

std::optional<ContaminationPuff> emit_puff(const PedestrianState& s, const EngineParams& p,
                                           Millis now) {
  if (s.healthy) return std::nullopt;
  return ContaminationPuff{bubble_of(s, p), now, p.c_start, s.id};
}

double contamination_level(const ContaminationPuff& puff, const EngineParams& p, Millis now) {
  if (now < puff.born) {
    throw ValidationError(ValidationCode::ClockSkew, "query time precedes puff birth");
  }
  const double t = static_cast<double>(now - puff.born) / 1000.0;
  double level = 0.0;
  switch (p.decay_law) {
    case DecayLaw::LinearToZero:
      level = puff.c_start * (1.0 - t / p.t_airborne);
      break;
    case DecayLaw::ScaledSlope:
      level = puff.c_start - 100.0 / (puff.c_start * p.t_airborne) * t;
      break;
  }
  return std::clamp(level, 0.0, puff.c_start);
}

ContaminationField prune_expired(const ContaminationField& field, const EngineParams& p,
                                 Millis now) {
  std::vector<ContaminationPuff> kept;
  kept.reserve(field.size());
  for (const auto& puff : field.puffs()) {
    if (contamination_level(puff, p, now) > 0.0) kept.push_back(puff);
  }
  return ContaminationField(std::move(kept));
}

std::vector<RedZone> active_red_zones(const ContaminationField& field,
                                      std::span<const PedestrianState> peers,
                                      const EngineParams& p, Millis now,
                                      std::string_view self_id) {
  std::vector<RedZone> zones;
  for (const auto& peer : peers) {
    if (peer.healthy || peer.id == self_id) continue;
    zones.push_back({bubble_of(peer, p), p.c_start, ZoneKind::LivePedestrian, peer.id});
  }
  for (const auto& puff : field.puffs()) {
    if (puff.emitter == self_id) continue;
    const double level = contamination_level(puff, p, now);
    if (level <= 0.0) continue;
    zones.push_back({puff.area, level, ZoneKind::Trail, puff.emitter});
  }
  return zones;
}

}  // namespace pedsafe
