#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pedsafe/model.hpp"

namespace pedsafe {

/// A circle left behind at an unhealthy pedestrian's past position.
struct ContaminationPuff {
  Circle area;
  Millis born = 0;
  double c_start = 100.0;
  std::string emitter;

  friend bool operator==(const ContaminationPuff&, const ContaminationPuff&) = default;
};

enum class ZoneKind { LivePedestrian, Trail };

std::string_view to_string(ZoneKind kind);

/// Any circle to avoid: a live unhealthy bubble or a surviving puff.
struct RedZone {
  Circle area;
  double level = 0.0;  // percent
  ZoneKind kind = ZoneKind::Trail;
  std::string source;  // emitting pedestrian id

  friend bool operator==(const RedZone&, const RedZone&) = default;
};

/// Puffs in emission order.
class ContaminationField {
 public:
  ContaminationField() = default;
  explicit ContaminationField(std::vector<ContaminationPuff> puffs) : puffs_(std::move(puffs)) {}

  void add(ContaminationPuff puff) { puffs_.push_back(std::move(puff)); }

  std::span<const ContaminationPuff> puffs() const { return puffs_; }
  std::size_t size() const { return puffs_.size(); }
  bool empty() const { return puffs_.empty(); }

  friend bool operator==(const ContaminationField&, const ContaminationField&) = default;

 private:
  std::vector<ContaminationPuff> puffs_;
};

/// Nothing for healthy pedestrians; otherwise a full-strength puff on the
/// pedestrian's bubble, born at `now`.
std::optional<ContaminationPuff> emit_puff(const PedestrianState& s, const EngineParams& p,
                                           Millis now);

/// Linear decay of the puff's contamination percentage, clamped to
/// [0, c_start]. Throws ClockSkew if `now` precedes the puff's birth.
double contamination_level(const ContaminationPuff& puff, const EngineParams& p, Millis now);

/// Keeps exactly the puffs whose level is still positive, in order.
ContaminationField prune_expired(const ContaminationField& field, const EngineParams& p,
                                 Millis now);

/// Live bubbles of unhealthy peers followed by every surviving trail puff.
/// Anything emitted by `self_id` is left out.
std::vector<RedZone> active_red_zones(const ContaminationField& field,
                                      std::span<const PedestrianState> peers,
                                      const EngineParams& p, Millis now,
                                      std::string_view self_id = {});

}  // namespace pedsafe
