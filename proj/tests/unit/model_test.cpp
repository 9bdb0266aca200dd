#include "pedsafe/model.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "pedsafe/error.hpp"
#include "pedsafe/protocol.hpp"

namespace pedsafe {
namespace {

const FrameOrigin kFrame{{40.0, -83.0}};

PedestrianState at(double x, double y) {
  PedestrianState s;
  s.id = "p";
  s.position = {x, y};
  return s;
}

StateMessage message(double speed = 1.4, double heading = 90.0) {
  return {"alice", 40.0001, -83.0001, speed, heading, true, 1000};
}

ValidationCode rejection(const StateMessage& m, std::optional<Millis> prev = std::nullopt) {
  try {
    validate_state(m, kFrame, prev);
  } catch (const ValidationError& e) {
    return e.code();
  }
  ADD_FAILURE() << "message accepted";
  return ValidationCode::ContractViolation;
}

TEST(EngineParams, DefaultsAreValid) {
  const EngineParams p;
  EXPECT_NO_THROW(p.validate());
  EXPECT_DOUBLE_EQ(p.bubble_radius, 9.144);
  EXPECT_DOUBLE_EQ(p.t_airborne, 10'800.0);
  EXPECT_DOUBLE_EQ(p.horizon, 3.0);
  EXPECT_DOUBLE_EQ(p.update_period, 1.0);
}

TEST(EngineParams, RejectsBrokenInvariants) {
  EngineParams p;
  p.bubble_radius = 1.0;
  EXPECT_THROW(p.validate(), ValidationError);
  p = {};
  p.horizon_step = 4.0;
  EXPECT_THROW(p.validate(), ValidationError);
  p = {};
  p.c_start = 120.0;
  EXPECT_THROW(p.validate(), ValidationError);
  p = {};
  p.t_airborne = 0.0;
  EXPECT_THROW(p.validate(), ValidationError);
}

TEST(BubbleOf, ThirtyFeetAroundThePedestrian) {
  const EngineParams p;
  EXPECT_EQ(bubble_of(at(0, 0), p), (Circle{{0, 0}, 9.144}));
  EXPECT_EQ(bubble_of(at(5, -3), p), (Circle{{5, -3}, 9.144}));
  EngineParams cdc;
  cdc.bubble_radius = 1.8288;
  EXPECT_NO_THROW(cdc.validate());
  EXPECT_EQ(bubble_of(at(2, 2), cdc), (Circle{{2, 2}, 1.8288}));
}

TEST(BubbleOf, IndependentOfKinematics) {
  PedestrianState s = at(3, 4);
  s.speed = 9.0;
  s.theta = 1.0;
  s.healthy = false;
  EXPECT_EQ(bubble_of(s, EngineParams{}), bubble_of(at(3, 4), EngineParams{}));
}

TEST(CirclesIntersect, RadiusSumBoundary) {
  EXPECT_TRUE(circles_intersect({{0, 0}, 9.144}, {{18.0, 0}, 9.144}));
  EXPECT_FALSE(circles_intersect({{0, 0}, 9.144}, {{18.289, 0}, 9.144}));
  EXPECT_TRUE(circles_intersect({{1, 1}, 2.0}, {{1, 1}, 2.0}));
  EXPECT_TRUE(circles_intersect({{0, 0}, 1.0}, {{2.0, 0}, 1.0}));  // tangent
}

TEST(CirclesIntersectProperty, SymmetricAndTranslationInvariant) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> c(-50.0, 50.0);
  std::uniform_real_distribution<double> r(0.5, 20.0);
  std::uniform_int_distribution<int> shift(-1000, 1000);
  for (int i = 0; i < 5000; ++i) {
    const Circle a{{c(rng), c(rng)}, r(rng)};
    const Circle b{{c(rng), c(rng)}, r(rng)};
    ASSERT_EQ(circles_intersect(a, b), circles_intersect(b, a));
    // Integer shifts keep the arithmetic exact.
    const double dx = shift(rng);
    const double dy = shift(rng);
    const Circle a2{{a.center.x + dx, a.center.y + dy}, a.radius};
    const Circle b2{{b.center.x + dx, b.center.y + dy}, b.radius};
    const double gap = distance(a.center, b.center) - a.radius - b.radius;
    if (std::abs(gap) > 1e-9) ASSERT_EQ(circles_intersect(a, b), circles_intersect(a2, b2));
  }
}

TEST(ValidateState, NamedErrors) {
  auto m = message();
  m.speed_mps = -1.0;
  EXPECT_EQ(rejection(m), ValidationCode::NegativeSpeed);
  m = message();
  m.lat = 91.0;
  EXPECT_EQ(rejection(m), ValidationCode::LatOutOfRange);
  m = message();
  m.lon = 181.0;
  EXPECT_EQ(rejection(m), ValidationCode::LonOutOfRange);
  m = message();
  m.speed_mps = 15.5;
  EXPECT_EQ(rejection(m), ValidationCode::SpeedAboveCap);
  m = message();
  m.id.clear();
  EXPECT_EQ(rejection(m), ValidationCode::EmptyId);
  m = message();
  m.heading_deg = 360.0;
  EXPECT_EQ(rejection(m), ValidationCode::HeadingOutOfRange);
  m = message();
  m.speed_mps = NAN;
  EXPECT_EQ(rejection(m), ValidationCode::NonFinite);
  EXPECT_EQ(rejection(message(), Millis{2000}), ValidationCode::StampRegression);
}

TEST(ValidateState, EqualStampIsAccepted) {
  EXPECT_NO_THROW(validate_state(message(), kFrame, Millis{1000}));
}

TEST(ValidateState, ComposesGeodesy) {
  const auto m = message(1.4, 225.0);
  const PedestrianState s = validate_state(m, kFrame);
  EXPECT_EQ(s.id, "alice");
  EXPECT_EQ(s.theta, heading_to_theta(225.0));
  EXPECT_EQ(s.position, to_local({m.lat, m.lon}, kFrame));
  EXPECT_EQ(s.geo, (GeoPoint{m.lat, m.lon}));
  EXPECT_EQ(s.speed, 1.4);
  EXPECT_EQ(s.stamp, 1000);
}

TEST(ValidateStateProperty, IdempotentThroughTheWire) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> off(-0.01, 0.01);
  std::uniform_real_distribution<double> speed(0.0, kSpeedCapMps);
  std::uniform_real_distribution<double> heading(0.0, 360.0);
  for (int i = 0; i < 2000; ++i) {
    StateMessage m{"p" + std::to_string(i), 40.0 + off(rng), -83.0 + off(rng), speed(rng),
                   heading(rng), i % 2 == 0, i};
    m = protocol::canonicalize(m);
    const PedestrianState first = validate_state(m, kFrame);
    const PedestrianState second =
        validate_state(protocol::canonicalize(to_message(first)), kFrame);
    ASSERT_EQ(first, second) << protocol::encode_state(m);
  }
}

}  // namespace
}  // namespace pedsafe
