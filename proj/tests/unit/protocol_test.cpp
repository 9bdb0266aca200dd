#include "pedsafe/protocol.hpp"

#include <random>

#include <gtest/gtest.h>

namespace pedsafe::protocol {
namespace {

constexpr const char* kCanonical =
    R"({"type":"state","id":"alice","lat":40.0012345,"lon":-83.0154321,"speed_mps":1.4,)"
    R"("heading_deg":271.5,"healthy":false,"t_ms":12000})";

ErrorKind kind_of(std::string_view text, std::string* field = nullptr) {
  try {
    decode_state(text);
  } catch (const ProtocolError& e) {
    if (field) *field = e.field();
    return e.kind();
  }
  ADD_FAILURE() << "decoded: " << text;
  return ErrorKind::MalformedMessage;
}

TEST(DecodeState, WellFormedLine) {
  const StateMessage m = decode_state(kCanonical);
  EXPECT_EQ(m.id, "alice");
  EXPECT_DOUBLE_EQ(m.lat, 40.0012345);
  EXPECT_DOUBLE_EQ(m.lon, -83.0154321);
  EXPECT_DOUBLE_EQ(m.speed_mps, 1.4);
  EXPECT_DOUBLE_EQ(m.heading_deg, 271.5);
  EXPECT_FALSE(m.healthy);
  EXPECT_EQ(m.t_ms, 12000);
}

TEST(DecodeState, UnknownFieldsAreIgnored) {
  const std::string text =
      R"({"type":"state","id":"a","lat":1,"lon":2,"speed_mps":0,"heading_deg":0,)"
      R"("healthy":true,"t_ms":0,"battery":0.5})";
  EXPECT_EQ(decode_state(text).id, "a");
}

TEST(DecodeState, Errors) {
  std::string field;
  EXPECT_EQ(kind_of("not json"), ErrorKind::MalformedMessage);
  EXPECT_EQ(kind_of("[1,2]"), ErrorKind::MalformedMessage);
  EXPECT_EQ(kind_of(R"({"type":"hello"})"), ErrorKind::UnknownType);
  EXPECT_EQ(kind_of(R"({"id":"a"})", &field), ErrorKind::FieldError);
  EXPECT_EQ(field, "type");

  std::string bad = kCanonical;
  bad.replace(bad.find("271.5"), 5, "\"north\"");
  EXPECT_EQ(kind_of(bad, &field), ErrorKind::FieldError);
  EXPECT_EQ(field, "heading_deg");

  bad = kCanonical;
  bad.replace(bad.find("12000"), 5, "12.5");
  EXPECT_EQ(kind_of(bad, &field), ErrorKind::FieldError);
  EXPECT_EQ(field, "t_ms");

  bad = kCanonical;
  bad.replace(bad.find("false"), 5, "0");
  EXPECT_EQ(kind_of(bad, &field), ErrorKind::FieldError);
  EXPECT_EQ(field, "healthy");

  bad = kCanonical;
  bad.erase(bad.find(R"("lon")"), std::string(R"("lon":-83.0154321,)").size());
  EXPECT_EQ(kind_of(bad, &field), ErrorKind::FieldError);
  EXPECT_EQ(field, "lon");
}

TEST(EncodeState, CanonicalTextIsAFixedPoint) {
  EXPECT_EQ(encode_state(decode_state(kCanonical)), kCanonical);
}

TEST(EncodeState, RoundingRules) {
  StateMessage m{"b", 40.00000014, -83.0, 1.23456, 90.0, true, 5};
  const std::string text = encode_state(m);
  EXPECT_NE(text.find(R"("lat":40.0000001,)"), std::string::npos) << text;
  EXPECT_NE(text.find(R"("lon":-83,)"), std::string::npos) << text;
  EXPECT_NE(text.find(R"("speed_mps":1.235,)"), std::string::npos) << text;
  EXPECT_NE(text.find(R"("heading_deg":90,)"), std::string::npos) << text;
}

TEST(EncodeState, HeadingThatRoundsToFullCircleWrapsToZero) {
  StateMessage m{"c", 0, 0, 0, 359.9999, true, 0};
  EXPECT_NE(encode_state(m).find(R"("heading_deg":0,)"), std::string::npos);
}

TEST(EncodeState, IdsAreEscaped) {
  StateMessage m{"quote\"me", 0, 0, 0, 0, true, 0};
  EXPECT_EQ(decode_state(encode_state(m)).id, "quote\"me");
}

TEST(FormatNumber, TrimsZeros) {
  EXPECT_EQ(format_number(1.5, 3), "1.5");
  EXPECT_EQ(format_number(2.0, 3), "2");
  EXPECT_EQ(format_number(-0.0000001, 3), "0");
  EXPECT_EQ(format_number(-83.01, 7), "-83.01");
}

TEST(StateCodecProperty, DecodeEncodeIsIdentityOnCanonicalMessages) {
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> lat(-89.0, 89.0);
  std::uniform_real_distribution<double> lon(-179.0, 179.0);
  std::uniform_real_distribution<double> speed(0.0, 15.0);
  std::uniform_real_distribution<double> heading(0.0, 360.0);
  for (int i = 0; i < 5000; ++i) {
    const StateMessage raw{"id" + std::to_string(i), lat(rng), lon(rng), speed(rng),
                           heading(rng), i % 3 == 0, static_cast<Millis>(rng())};
    const std::string text = encode_state(raw);
    const StateMessage canonical = decode_state(text);
    ASSERT_EQ(encode_state(canonical), text);
    ASSERT_EQ(decode_state(encode_state(canonical)), canonical);
    ASSERT_NEAR(canonical.lat, raw.lat, 0.5e-7 + 1e-12);
    ASSERT_NEAR(canonical.speed_mps, raw.speed_mps, 0.5e-3 + 1e-12);
  }
}

TEST(Advisory, EncodeDecode) {
  AdvisoryMessage a{"me", WarningLevel::RedZonePredicted, 2.5,
                    {{40.0000001, -83.0, 9.144, 50.0, ZoneKind::Trail},
                     {40.0001, -83.0002, 9.144, 100.0, ZoneKind::LivePedestrian}}};
  const std::string text = encode_advisory(a);
  EXPECT_EQ(text,
            R"({"type":"advisory","id":"me","state":"RedZonePredicted","ttc_s":2.5,"zones":[)"
            R"({"lat":40.0000001,"lon":-83,"radius_m":9.144,"level_pct":50,"kind":"Trail"},)"
            R"({"lat":40.0001,"lon":-83.0002,"radius_m":9.144,"level_pct":100,)"
            R"("kind":"LivePedestrian"}]})");
  EXPECT_EQ(decode_advisory(text), a);
  EXPECT_EQ(message_type(text), "advisory");
}

TEST(Advisory, SafeHasNoTimeToContact) {
  const std::string text = encode_advisory({"me", WarningLevel::AreaSafe, std::nullopt, {}});
  EXPECT_EQ(text, R"({"type":"advisory","id":"me","state":"AreaSafe","zones":[]})");
  EXPECT_THROW(decode_state(text), ProtocolError);
}

TEST(Advisory, ZonesMirrorRedZones) {
  const FrameOrigin frame{{40.0, -83.0}};
  Evaluation e;
  e.state.id = "me";
  e.zones = {{{{10.0, 20.0}, 9.144}, 66.5, ZoneKind::Trail, "u"}};
  e.warning = {WarningLevel::InRedZone, e.zones[0], std::nullopt};
  const auto a = make_advisory(e, frame);
  ASSERT_EQ(a.zones.size(), 1u);
  const GeoPoint g = to_geo({10.0, 20.0}, frame);
  EXPECT_EQ(a.zones[0].lat, g.lat);
  EXPECT_EQ(a.zones[0].lon, g.lon);
  EXPECT_EQ(a.zones[0].radius_m, 9.144);
  EXPECT_EQ(a.zones[0].level_pct, 66.5);
  EXPECT_EQ(a.state, WarningLevel::InRedZone);
  EXPECT_FALSE(a.ttc_s.has_value());
}

}  // namespace
}  // namespace pedsafe::protocol
