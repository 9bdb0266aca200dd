#include <cmath>
#include <map>

#include <json.hpp>

#include "pedsafe/scenario.hpp"

namespace pedsafe::scenario {

namespace {

using nlohmann::ordered_json;

constexpr int kCircleSegments = 32;

ordered_json lon_lat(const LocalPoint& p, const FrameOrigin& frame) {
  const GeoPoint g = to_geo(p, frame);
  // Rounded to the wire's 7 decimals so output is stable across platforms.
  return ordered_json::array({std::round(g.lon * 1e7) / 1e7, std::round(g.lat * 1e7) / 1e7});
}

ordered_json feature(ordered_json geometry, ordered_json properties) {
  ordered_json f;
  f["type"] = "Feature";
  f["geometry"] = std::move(geometry);
  f["properties"] = std::move(properties);
  return f;
}

}  // namespace

std::string trace_to_ndjson(const Trace& trace) {
  using protocol::format_number;
  std::string out;
  for (const auto& e : trace.events) {
    out += "{\"t_s\":" + format_number(e.t_s, 3);
    out += ",\"id\":" + ordered_json(e.id).dump();
    out += ",\"x\":" + format_number(e.position.x, 3);
    out += ",\"y\":" + format_number(e.position.y, 3);
    out += ",\"warning\":\"";
    out += to_string(e.warning.level);
    out += "\"";
    if (e.warning.time_to_contact) {
      out += ",\"ttc_s\":" + format_number(*e.warning.time_to_contact, 3);
    }
    out += ",\"zones_active\":" + std::to_string(e.zones_active);
    out += ",\"alert\":\"";
    out += to_string(e.alert);
    out += "\"}\n";
  }
  return out;
}

std::string trace_to_geojson(const Trace& trace, const ScenarioScript& script) {
  const FrameOrigin frame{script.origin};
  ordered_json features = ordered_json::array();

  std::map<std::string, std::vector<const TraceEvent*>> by_id;
  for (const auto& e : trace.events) by_id[e.id].push_back(&e);

  for (const auto& [id, events] : by_id) {
    ordered_json coords = ordered_json::array();
    for (const auto* e : events) coords.push_back(lon_lat(e->position, frame));
    ordered_json props;
    props["kind"] = "path";
    props["id"] = id;
    features.push_back(feature({{"type", "LineString"}, {"coordinates", coords}}, props));
  }

  for (const auto& puff : trace.puffs) {
    ordered_json ring = ordered_json::array();
    for (int k = 0; k <= kCircleSegments; ++k) {
      const double a = 2.0 * kPi * (k % kCircleSegments) / kCircleSegments;
      const LocalPoint p{puff.area.center.x + puff.area.radius * std::cos(a),
                         puff.area.center.y + puff.area.radius * std::sin(a)};
      ring.push_back(lon_lat(p, frame));
    }
    ordered_json props;
    props["kind"] = "puff";
    props["t_s"] = puff.t_s;
    props["emitter"] = puff.emitter;
    props["radius_m"] = puff.area.radius;
    props["level_pct"] = puff.level_pct;
    features.push_back(
        feature({{"type", "Polygon"}, {"coordinates", ordered_json::array({ring})}}, props));
  }

  for (const auto& [id, events] : by_id) {
    for (std::size_t i = 1; i < events.size(); ++i) {
      const auto from = events[i - 1]->warning.level;
      const auto to = events[i]->warning.level;
      if (from == to) continue;
      ordered_json props;
      props["kind"] = "transition";
      props["id"] = id;
      props["t_s"] = events[i]->t_s;
      props["from"] = to_string(from);
      props["to"] = to_string(to);
      features.push_back(feature(
          {{"type", "Point"}, {"coordinates", lon_lat(events[i]->position, frame)}}, props));
    }
  }

  ordered_json doc;
  doc["type"] = "FeatureCollection";
  doc["features"] = std::move(features);
  return doc.dump() + "\n";
}

}  // namespace pedsafe::scenario
