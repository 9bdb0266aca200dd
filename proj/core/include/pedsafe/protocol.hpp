#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pedsafe/engine.hpp"
#include "pedsafe/model.hpp"

namespace pedsafe::protocol {

enum class ErrorKind { MalformedMessage, UnknownType, FieldError };

class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(ErrorKind kind, std::string field, const std::string& what)
      : std::runtime_error(what), kind_(kind), field_(std::move(field)) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Offending field name for FieldError, empty otherwise.
  const std::string& field() const noexcept { return field_; }

 private:
  ErrorKind kind_;
  std::string field_;
};

struct AdvisoryZone {
  double lat = 0.0;
  double lon = 0.0;
  double radius_m = 0.0;
  double level_pct = 0.0;
  ZoneKind kind = ZoneKind::Trail;

  friend bool operator==(const AdvisoryZone&, const AdvisoryZone&) = default;
};

struct AdvisoryMessage {
  std::string id;
  WarningLevel state = WarningLevel::AreaSafe;
  std::optional<double> ttc_s;
  std::vector<AdvisoryZone> zones;

  friend bool operator==(const AdvisoryMessage&, const AdvisoryMessage&) = default;
};

/// Fixed-point rendering with trailing zeros removed ("1.500" -> "1.5",
/// "90.000" -> "90"). Used for every number on the wire.
std::string format_number(double value, int decimals);

/// Value of the "type" member; throws MalformedMessage/FieldError.
std::string message_type(std::string_view text);

StateMessage decode_state(std::string_view text);

/// Canonical single-line form: fixed key order, lat/lon at 7 decimals,
/// speed and heading at 3.
std::string encode_state(const StateMessage& m);

/// Round-trips `m` through the wire encoding.
StateMessage canonicalize(const StateMessage& m);

AdvisoryMessage make_advisory(const Evaluation& e, const FrameOrigin& frame);

std::string encode_advisory(const AdvisoryMessage& m);
AdvisoryMessage decode_advisory(std::string_view text);

}  // namespace pedsafe::protocol
