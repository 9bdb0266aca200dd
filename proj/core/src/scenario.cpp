#include "pedsafe/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pedsafe/error.hpp"
#include "pedsafe/relay.hpp"

namespace pedsafe::scenario {

namespace {

using nlohmann::json;

json parse_json(std::string_view text, const std::string& what) {
  json doc = json::parse(text.begin(), text.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw ScenarioError(what + ": not a JSON object");
  }
  return doc;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double number_at(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    throw ScenarioError(where + ": '" + key + "' must be a number");
  }
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw ScenarioError(where + ": '" + key + "' must be finite");
  return v;
}

GeoPoint geo_at(const json& obj, const std::string& where) {
  if (!obj.is_object()) throw ScenarioError(where + " must be an object");
  GeoPoint g{number_at(obj, "lat", where), number_at(obj, "lon", where)};
  try {
    validate_geo(g);
  } catch (const ValidationError& e) {
    throw ScenarioError(where + ": " + e.what());
  }
  return g;
}

ParamOverrides overrides_from(const json& doc, EngineParams base, bool allow_origin) {
  ParamOverrides out{base, std::nullopt};
  EngineParams& p = out.params;
  for (const auto& [key, value] : doc.items()) {
    const std::string where = "params." + key;
    if (key == "origin" && allow_origin) {
      out.origin = geo_at(value, where);
      continue;
    }
    if (key == "decay_law") {
      if (value == "linear_to_zero") {
        p.decay_law = DecayLaw::LinearToZero;
      } else if (value == "scaled_slope") {
        p.decay_law = DecayLaw::ScaledSlope;
      } else {
        throw ScenarioError(where + ": expected \"linear_to_zero\" or \"scaled_slope\"");
      }
      continue;
    }
    if (!value.is_number()) throw ScenarioError(where + ": must be a number");
    const double v = value.get<double>();
    if (key == "bubble_radius_m") {
      p.bubble_radius = v;
    } else if (key == "t_airborne_s") {
      p.t_airborne = v;
    } else if (key == "c_start_pct") {
      p.c_start = v;
    } else if (key == "horizon_s") {
      p.horizon = v;
    } else if (key == "horizon_step_s") {
      p.horizon_step = v;
    } else if (key == "update_period_s") {
      p.update_period = v;
    } else if (key == "stale_timeout_s") {
      p.stale_timeout = v;
    } else {
      throw ScenarioError("unknown parameter '" + key + "'");
    }
  }
  try {
    p.validate();
  } catch (const ValidationError& e) {
    throw ScenarioError(std::string("params: ") + e.what());
  }
  return out;
}

double heading_of(double dx, double dy) {
  if (dx == 0.0 && dy == 0.0) return 0.0;
  double h = rad_to_deg(std::atan2(dx, dy));
  if (h < 0.0) h += 360.0;
  if (h >= 360.0) h -= 360.0;
  return h;
}

LocalPoint position_at(const Track& track, double t) {
  const auto& w = track.waypoints;
  if (t <= w.front().t_s) return {w.front().x, w.front().y};
  if (t >= w.back().t_s) return {w.back().x, w.back().y};
  auto hi = std::upper_bound(w.begin(), w.end(), t,
                             [](double v, const Waypoint& p) { return v < p.t_s; });
  auto lo = hi - 1;
  const double f = (t - lo->t_s) / (hi->t_s - lo->t_s);
  return {lo->x + f * (hi->x - lo->x), lo->y + f * (hi->y - lo->y)};
}

Millis to_millis(double seconds) { return static_cast<Millis>(std::llround(seconds * 1000.0)); }

}  // namespace

double ScenarioScript::end_time() const {
  double end = 0.0;
  for (const auto& t : tracks) {
    if (!t.waypoints.empty()) end = std::max(end, t.waypoints.back().t_s);
  }
  return end;
}

ParamOverrides apply_param_overrides(std::string_view json_text, EngineParams base) {
  return overrides_from(parse_json(json_text, "params"), base, true);
}

ParamOverrides load_params(const std::filesystem::path& path, EngineParams base) {
  return apply_param_overrides(read_file(path), base);
}

ScenarioScript parse_scenario(std::string_view json_text) {
  const json doc = parse_json(json_text, "scenario");
  ScenarioScript s;

  auto name = doc.find("name");
  if (name == doc.end() || !name->is_string()) throw ScenarioError("'name' must be a string");
  s.name = name->get<std::string>();

  auto origin = doc.find("origin");
  if (origin == doc.end()) throw ScenarioError("'origin' is required");
  s.origin = geo_at(*origin, "origin");

  if (auto params = doc.find("params"); params != doc.end()) {
    if (!params->is_object()) throw ScenarioError("'params' must be an object");
    s.params = overrides_from(*params, EngineParams{}, false).params;
  }

  if (auto c = doc.find("controlled_id"); c != doc.end() && !c->is_null()) {
    if (!c->is_string() || c->get<std::string>().empty()) {
      throw ScenarioError("'controlled_id' must be a non-empty string");
    }
    s.controlled_id = c->get<std::string>();
  }

  auto tracks = doc.find("tracks");
  if (tracks == doc.end() || !tracks->is_array() || tracks->empty()) {
    throw ScenarioError("'tracks' must be a non-empty array");
  }
  std::set<std::string> seen;
  for (std::size_t i = 0; i < tracks->size(); ++i) {
    const json& jt = (*tracks)[i];
    std::string where = "tracks[" + std::to_string(i) + "]";
    if (!jt.is_object()) throw ScenarioError(where + " must be an object");
    Track t;
    auto id = jt.find("id");
    if (id == jt.end() || !id->is_string() || id->get<std::string>().empty()) {
      throw ScenarioError(where + ": 'id' must be a non-empty string");
    }
    t.id = id->get<std::string>();
    where = "track '" + t.id + "'";
    if (!seen.insert(t.id).second) throw ScenarioError(where + ": duplicate id");
    auto healthy = jt.find("healthy");
    if (healthy == jt.end() || !healthy->is_boolean()) {
      throw ScenarioError(where + ": 'healthy' must be a boolean");
    }
    t.healthy = healthy->get<bool>();

    const bool controlled = s.controlled_id && *s.controlled_id == t.id;
    auto wps = jt.find("waypoints");
    if (wps != jt.end() && !wps->is_array()) {
      throw ScenarioError(where + ": 'waypoints' must be an array");
    }
    const std::size_t n = wps == jt.end() ? 0 : wps->size();
    if (controlled && n > 0) throw ScenarioError(where + ": controlled track must have no waypoints");
    if (!controlled && n == 0) throw ScenarioError(where + ": needs at least one waypoint");
    for (std::size_t k = 0; k < n; ++k) {
      const std::string wwhere = where + " waypoint " + std::to_string(k);
      const json& jw = (*wps)[k];
      if (!jw.is_object()) throw ScenarioError(wwhere + " must be an object");
      Waypoint w{number_at(jw, "t_s", wwhere), number_at(jw, "x", wwhere),
                 number_at(jw, "y", wwhere)};
      if (w.t_s < 0.0) throw ScenarioError(wwhere + ": t_s must be >= 0");
      if (!t.waypoints.empty()) {
        const Waypoint& prev = t.waypoints.back();
        if (w.t_s <= prev.t_s) throw ScenarioError(wwhere + ": t_s must be strictly increasing");
        const double v = std::hypot(w.x - prev.x, w.y - prev.y) / (w.t_s - prev.t_s);
        if (v > kSpeedCapMps) throw ScenarioError(wwhere + ": segment speed exceeds 15 m/s");
      }
      t.waypoints.push_back(w);
    }
    s.tracks.push_back(std::move(t));
  }
  return s;
}

ScenarioScript load_scenario(const std::filesystem::path& path) {
  try {
    return parse_scenario(read_file(path));
  } catch (const ScenarioError& e) {
    throw ScenarioError(path.filename().string() + ": " + e.what());
  }
}

TrackSample sample_track(const Track& track, double t_s, double tick_s) {
  if (track.waypoints.empty()) throw ScenarioError("track '" + track.id + "' has no waypoints");
  TrackSample out;
  out.position = position_at(track, t_s);
  const bool first = t_s - tick_s < 0.0;
  const LocalPoint a = first ? out.position : position_at(track, t_s - tick_s);
  const LocalPoint b = first ? position_at(track, t_s + tick_s) : out.position;
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  out.speed = std::hypot(dx, dy) / tick_s;
  out.heading_deg = heading_of(dx, dy);
  return out;
}

std::vector<WarningLevel> Trace::levels_of(std::string_view id) const {
  std::vector<WarningLevel> out;
  for (const auto& e : events) {
    if (e.id == id) out.push_back(e.warning.level);
  }
  return out;
}

Simulation::Simulation(ScenarioScript script)
    : script_(std::move(script)), engine_(script_.params, script_.origin), frame_{script_.origin} {}

Millis Simulation::now() const {
  return to_millis(static_cast<double>(tick_) * script_.params.update_period);
}

double Simulation::now_s() const { return static_cast<double>(tick_) * script_.params.update_period; }

bool Simulation::finished() const { return now_s() > script_.end_time() + 1e-9; }

StateMessage Simulation::message_for(const Track& track, std::size_t tick) const {
  const double period = script_.params.update_period;
  const double t = static_cast<double>(tick) * period;
  const TrackSample sample = sample_track(track, t, period);
  const GeoPoint g = to_geo(sample.position, frame_);
  StateMessage m{track.id, g.lat, g.lon, sample.speed, sample.heading_deg, track.healthy,
                 to_millis(t)};
  return protocol::canonicalize(m);
}

void Simulation::inject(const StateMessage& m) { injected_ = m; }

std::vector<TraceEvent> Simulation::step() {
  const Millis now_ms = now();
  const double t = now_s();

  for (const auto& track : script_.tracks) {
    if (track.waypoints.empty()) continue;
    engine_.ingest(message_for(track, tick_));
  }
  if (injected_) {
    try {
      engine_.ingest(*injected_);
    } catch (const ValidationError&) {
      // Dropped; the previous state for that id stays in place.
    }
    injected_.reset();
  }
  engine_.advance(now_ms);

  std::vector<TraceEvent> events;
  for (auto& e : engine_.evaluate_all(now_ms)) {
    events.push_back({t, e.state.id, e.state.position, e.warning, e.zones.size(), e.alert});
  }
  for (const auto& puff : engine_.field().puffs()) {
    trace_.puffs.push_back(
        {t, puff.emitter, puff.area, contamination_level(puff, engine_.params(), now_ms)});
  }
  trace_.events.insert(trace_.events.end(), events.begin(), events.end());
  ++tick_;
  return events;
}

Trace run(const ScenarioScript& script) {
  if (script.controlled_id) {
    throw ScenarioError("scenario '" + script.name + "' has a controlled track; use live mode");
  }
  Simulation sim(script);
  while (!sim.finished()) sim.step();
  return sim.trace();
}

std::map<std::string, std::vector<protocol::AdvisoryMessage>> replay_through_relay(
    const ScenarioScript& script) {
  if (script.controlled_id) {
    throw ScenarioError("scenario '" + script.name + "' has a controlled track; use live mode");
  }
  server::Relay relay({script.params, true, script.origin});
  Simulation clock(script);  // used only for message generation and timing

  std::vector<std::shared_ptr<server::InProcessConnection>> clients;
  for (std::size_t i = 0; i < script.tracks.size(); ++i) {
    clients.push_back(std::make_shared<server::InProcessConnection>());
  }

  std::map<std::string, std::vector<protocol::AdvisoryMessage>> out;
  const double period = script.params.update_period;
  for (std::size_t tick = 0; static_cast<double>(tick) * period <= script.end_time() + 1e-9;
       ++tick) {
    for (std::size_t i = 0; i < script.tracks.size(); ++i) {
      relay.submit(clients[i], protocol::encode_state(clock.message_for(script.tracks[i], tick)));
    }
    relay.tick(to_millis(static_cast<double>(tick) * period));
    for (std::size_t i = 0; i < script.tracks.size(); ++i) {
      for (const auto& text : clients[i]->take_received()) {
        if (protocol::message_type(text) == "advisory") {
          auto a = protocol::decode_advisory(text);
          out[a.id].push_back(std::move(a));
        }
      }
    }
  }
  return out;
}

}  // namespace pedsafe::scenario
