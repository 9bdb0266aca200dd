#include "pedsafe/protocol.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace pedsafe::protocol {

namespace {

using nlohmann::json;

constexpr int kGeoDecimals = 7;
constexpr int kKinematicDecimals = 3;

json parse_object(std::string_view text) {
  json doc = json::parse(text.begin(), text.end(), nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw ProtocolError(ErrorKind::MalformedMessage, "", "message is not a JSON object");
  }
  return doc;
}

[[noreturn]] void field_error(const std::string& name, const std::string& why) {
  throw ProtocolError(ErrorKind::FieldError, name, "field '" + name + "': " + why);
}

const json& member(const json& doc, const std::string& name) {
  auto it = doc.find(name);
  if (it == doc.end()) field_error(name, "missing");
  return *it;
}

double number_field(const json& doc, const std::string& name) {
  const json& v = member(doc, name);
  if (!v.is_number()) field_error(name, "expected a number");
  return v.get<double>();
}

std::string string_field(const json& doc, const std::string& name) {
  const json& v = member(doc, name);
  if (!v.is_string()) field_error(name, "expected a string");
  return v.get<std::string>();
}

bool bool_field(const json& doc, const std::string& name) {
  const json& v = member(doc, name);
  if (!v.is_boolean()) field_error(name, "expected a boolean");
  return v.get<bool>();
}

Millis integer_field(const json& doc, const std::string& name) {
  const json& v = member(doc, name);
  if (v.is_number_integer()) return v.get<Millis>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isfinite(d) && std::trunc(d) == d) return static_cast<Millis>(d);
  }
  field_error(name, "expected an integer");
}

void expect_type(const json& doc, std::string_view expected) {
  const std::string type = string_field(doc, "type");
  if (type != expected) {
    throw ProtocolError(ErrorKind::UnknownType, "type",
                        "expected type '" + std::string(expected) + "', got '" + type + "'");
  }
}

std::string quoted(const std::string& s) { return json(s).dump(); }

double wrap_heading(double heading) {
  // A heading that rounds up to 360 is the same direction as 0.
  const double scale = std::pow(10.0, kKinematicDecimals);
  return std::round(heading * scale) / scale >= 360.0 ? 0.0 : heading;
}

}  // namespace

std::string format_number(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string s(buf);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

std::string message_type(std::string_view text) {
  return string_field(parse_object(text), "type");
}

StateMessage decode_state(std::string_view text) {
  const json doc = parse_object(text);
  expect_type(doc, "state");
  StateMessage m;
  m.id = string_field(doc, "id");
  m.lat = number_field(doc, "lat");
  m.lon = number_field(doc, "lon");
  m.speed_mps = number_field(doc, "speed_mps");
  m.heading_deg = number_field(doc, "heading_deg");
  m.healthy = bool_field(doc, "healthy");
  m.t_ms = integer_field(doc, "t_ms");
  return m;
}

std::string encode_state(const StateMessage& m) {
  std::string out = R"({"type":"state","id":)";
  out += quoted(m.id);
  out += ",\"lat\":" + format_number(m.lat, kGeoDecimals);
  out += ",\"lon\":" + format_number(m.lon, kGeoDecimals);
  out += ",\"speed_mps\":" + format_number(m.speed_mps, kKinematicDecimals);
  out += ",\"heading_deg\":" + format_number(wrap_heading(m.heading_deg), kKinematicDecimals);
  out += ",\"healthy\":";
  out += m.healthy ? "true" : "false";
  out += ",\"t_ms\":" + std::to_string(m.t_ms);
  out += "}";
  return out;
}

StateMessage canonicalize(const StateMessage& m) { return decode_state(encode_state(m)); }

AdvisoryMessage make_advisory(const Evaluation& e, const FrameOrigin& frame) {
  AdvisoryMessage a;
  a.id = e.state.id;
  a.state = e.warning.level;
  a.ttc_s = e.warning.time_to_contact;
  a.zones.reserve(e.zones.size());
  for (const auto& z : e.zones) {
    const GeoPoint g = to_geo(z.area.center, frame);
    a.zones.push_back({g.lat, g.lon, z.area.radius, z.level, z.kind});
  }
  return a;
}

std::string encode_advisory(const AdvisoryMessage& m) {
  std::string out = R"({"type":"advisory","id":)";
  out += quoted(m.id);
  out += ",\"state\":\"";
  out += to_string(m.state);
  out += "\"";
  if (m.ttc_s) out += ",\"ttc_s\":" + format_number(*m.ttc_s, kKinematicDecimals);
  out += ",\"zones\":[";
  for (std::size_t i = 0; i < m.zones.size(); ++i) {
    const auto& z = m.zones[i];
    if (i > 0) out += ",";
    out += "{\"lat\":" + format_number(z.lat, kGeoDecimals);
    out += ",\"lon\":" + format_number(z.lon, kGeoDecimals);
    out += ",\"radius_m\":" + format_number(z.radius_m, kKinematicDecimals);
    out += ",\"level_pct\":" + format_number(z.level_pct, kKinematicDecimals);
    out += ",\"kind\":\"";
    out += to_string(z.kind);
    out += "\"}";
  }
  out += "]}";
  return out;
}

AdvisoryMessage decode_advisory(std::string_view text) {
  const json doc = parse_object(text);
  expect_type(doc, "advisory");
  AdvisoryMessage m;
  m.id = string_field(doc, "id");
  const auto level = parse_warning_level(string_field(doc, "state"));
  if (!level) field_error("state", "unknown warning state");
  m.state = *level;
  if (doc.contains("ttc_s")) m.ttc_s = number_field(doc, "ttc_s");
  const json& zones = member(doc, "zones");
  if (!zones.is_array()) field_error("zones", "expected an array");
  for (const auto& z : zones) {
    if (!z.is_object()) field_error("zones", "expected objects");
    AdvisoryZone az;
    az.lat = number_field(z, "lat");
    az.lon = number_field(z, "lon");
    az.radius_m = number_field(z, "radius_m");
    az.level_pct = number_field(z, "level_pct");
    const std::string kind = string_field(z, "kind");
    if (kind == "LivePedestrian") {
      az.kind = ZoneKind::LivePedestrian;
    } else if (kind == "Trail") {
      az.kind = ZoneKind::Trail;
    } else {
      field_error("kind", "unknown zone kind");
    }
    m.zones.push_back(az);
  }
  return m;
}

}  // namespace pedsafe::protocol
