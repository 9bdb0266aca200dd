#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pedsafe/contamination.hpp"
#include "pedsafe/prediction.hpp"

namespace pedsafe {

/// One pedestrian's view of the world at a tick.
struct Evaluation {
  PedestrianState state;
  std::vector<RedZone> zones;
  WarningState warning;
  AlertPattern alert = AlertPattern::None;
};

/// Shared update pipeline used by both the replay harness and the relay's
/// advisory mode: validate -> emit -> prune -> zones -> classify -> alert.
///
/// Not thread-safe; owned by a single tick loop.
class Engine {
 public:
  explicit Engine(EngineParams params, std::optional<GeoPoint> origin = std::nullopt);

  const EngineParams& params() const { return params_; }

  /// Unset until an origin is given or the first message is accepted.
  const std::optional<FrameOrigin>& frame() const { return frame_; }

  /// Validates `m` against the frame and the id's previous stamp, then
  /// stores it as that pedestrian's latest state. Throws ValidationError;
  /// a rejected message leaves the previous state untouched. With
  /// `fresh_session` the previous stamp is not enforced (a reconnect).
  const PedestrianState& ingest(const StateMessage& m, bool fresh_session = false);

  /// Emits one puff per pedestrian updated since the last call (in update
  /// order) and prunes expired puffs.
  void advance(Millis now);

  /// Drops a pedestrian's live state. Puffs already emitted keep decaying.
  bool remove(std::string_view id);

  const PedestrianState* find(std::string_view id) const;
  const std::vector<PedestrianState>& pedestrians() const { return states_; }
  const ContaminationField& field() const { return field_; }

  std::vector<RedZone> red_zones_for(std::string_view id, Millis now) const;

  /// Throws std::out_of_range for unknown ids.
  Evaluation evaluate(std::string_view id, Millis now) const;

  /// Every known pedestrian, ordered by id.
  std::vector<Evaluation> evaluate_all(Millis now) const;

 private:
  EngineParams params_;
  std::optional<FrameOrigin> frame_;
  std::vector<PedestrianState> states_;  // first-appearance order
  std::map<std::string, Millis, std::less<>> last_stamp_;
  std::vector<std::string> pending_;  // updated since last advance()
  ContaminationField field_;
};

}  // namespace pedsafe
