#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pedsafe/engine.hpp"
#include "pedsafe/protocol.hpp"

namespace pedsafe::scenario {

struct Waypoint {
  double t_s = 0.0;
  double x = 0.0;
  double y = 0.0;
};

struct Track {
  std::string id;
  bool healthy = true;
  std::vector<Waypoint> waypoints;
};

struct ScenarioScript {
  std::string name;
  GeoPoint origin;
  EngineParams params;
  std::vector<Track> tracks;
  std::optional<std::string> controlled_id;  // live input, no waypoints

  double end_time() const;
};

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Engine parameter overrides from a JSON object (scenario "params" block or
/// a --params file). Unknown keys are rejected.
struct ParamOverrides {
  EngineParams params;
  std::optional<GeoPoint> origin;
};
ParamOverrides apply_param_overrides(std::string_view json_text, EngineParams base);
ParamOverrides load_params(const std::filesystem::path& path, EngineParams base = {});

ScenarioScript parse_scenario(std::string_view json_text);
ScenarioScript load_scenario(const std::filesystem::path& path);

/// Kinematics of a track at a tick: linear interpolation between waypoints
/// (held at the ends), velocity by backward difference over one tick
/// (forward difference at t = 0).
struct TrackSample {
  LocalPoint position;
  double speed = 0.0;
  double heading_deg = 0.0;
};
TrackSample sample_track(const Track& track, double t_s, double tick_s);

struct TraceEvent {
  double t_s = 0.0;
  std::string id;
  LocalPoint position;
  WarningState warning;
  std::size_t zones_active = 0;
  AlertPattern alert = AlertPattern::None;
};

struct PuffSnapshot {
  double t_s = 0.0;
  std::string emitter;
  Circle area;
  double level_pct = 0.0;
};

struct Trace {
  std::vector<TraceEvent> events;  // ordered by (t_s, id)
  std::vector<PuffSnapshot> puffs;

  /// Warning levels of one pedestrian, one per tick.
  std::vector<WarningLevel> levels_of(std::string_view id) const;
};

/// Deterministic replay on a logical clock. Never reads wall-clock time.
class Simulation {
 public:
  explicit Simulation(ScenarioScript script);

  /// Processes the tick at now() for every track, then advances the clock
  /// by one update period. Returns the events of the processed tick.
  std::vector<TraceEvent> step();

  /// Supplies the controlled pedestrian's state for the next step().
  void inject(const StateMessage& m);

  Millis now() const;
  double now_s() const;
  bool finished() const;
  std::size_t ticks() const { return tick_; }

  /// State message a track publishes at the given tick, in wire precision.
  StateMessage message_for(const Track& track, std::size_t tick) const;

  const ScenarioScript& script() const { return script_; }
  const Engine& engine() const { return engine_; }
  const Trace& trace() const { return trace_; }

 private:
  ScenarioScript script_;
  Engine engine_;
  FrameOrigin frame_;
  std::size_t tick_ = 0;
  std::optional<StateMessage> injected_;
  Trace trace_;
};

/// Full replay until the last waypoint time. Requires no controlled_id.
Trace run(const ScenarioScript& script);

/// Newline-delimited records, one event per line, fixed field order.
std::string trace_to_ndjson(const Trace& trace);

/// FeatureCollection with per-pedestrian paths, per-tick puff polygons and
/// warning transition points.
std::string trace_to_geojson(const Trace& trace, const ScenarioScript& script);

/// Drives every track through an in-process relay in advisory mode and
/// returns the advisory each pedestrian received per tick, keyed by id.
std::map<std::string, std::vector<protocol::AdvisoryMessage>> replay_through_relay(
    const ScenarioScript& script);

}  // namespace pedsafe::scenario
