#include "pedsafe/contamination.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pedsafe/error.hpp"

namespace pedsafe {
namespace {

EngineParams demo_params() {
  EngineParams p;
  p.t_airborne = 6.0;
  return p;
}

PedestrianState walker(const std::string& id, double x, double y, bool healthy) {
  PedestrianState s;
  s.id = id;
  s.position = {x, y};
  s.healthy = healthy;
  return s;
}

ContaminationPuff puff_born(Millis born, const std::string& emitter = "u") {
  return {{{0, 0}, 9.144}, born, 100.0, emitter};
}

TEST(EmitPuff, HealthyPedestriansLeaveNothing) {
  EXPECT_FALSE(emit_puff(walker("h", 1, 2, true), EngineParams{}, 0).has_value());
}

TEST(EmitPuff, UnhealthyLeavesFullStrengthBubble) {
  const auto puff = emit_puff(walker("u", 10, 0, false), EngineParams{}, 4000);
  ASSERT_TRUE(puff.has_value());
  EXPECT_EQ(puff->area, (Circle{{10, 0}, 9.144}));
  EXPECT_EQ(puff->c_start, 100.0);
  EXPECT_EQ(puff->born, 4000);
  EXPECT_EQ(puff->emitter, "u");
}

TEST(EmitPuff, SpacingFollowsWalkingSpeed) {
  // Two 1 Hz updates of a 1.5 m/s walker heading east.
  const auto a = emit_puff(walker("u", 0.0, 0, false), EngineParams{}, 0);
  const auto b = emit_puff(walker("u", 1.5 * 1.0, 0, false), EngineParams{}, 1000);
  EXPECT_DOUBLE_EQ(distance(a->area.center, b->area.center), 1.5);
}

TEST(ContaminationLevel, LinearDecayToZero) {
  const auto p = demo_params();
  EXPECT_EQ(contamination_level(puff_born(0), p, 0), 100.0);
  EXPECT_NEAR(contamination_level(puff_born(0), p, 3000), 50.0, 1e-12);
  EXPECT_EQ(contamination_level(puff_born(0), p, 6000), 0.0);
  EXPECT_EQ(contamination_level(puff_born(0), p, 60'000), 0.0);
}

TEST(ContaminationLevel, ClockSkewIsAnError) {
  try {
    contamination_level(puff_born(5000), demo_params(), 4999);
    FAIL() << "expected ClockSkew";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.code(), ValidationCode::ClockSkew);
  }
}

TEST(ContaminationLevel, ScaledSlopeLawIsSelectable) {
  auto p = demo_params();
  p.decay_law = DecayLaw::ScaledSlope;
  // 100 - 100 / (100 * 6) * t: one sixth of a percent per second.
  EXPECT_NEAR(contamination_level(puff_born(0), p, 6000), 99.0, 1e-12);
  EXPECT_EQ(contamination_level(puff_born(0), p, 600'000), 0.0);
  EXPECT_GT(contamination_level(puff_born(0), p, 599'000), 0.0);
}

TEST(ContaminationLevelProperty, MatchesOracleAndNeverIncreases) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> c(1.0, 100.0);
  std::uniform_real_distribution<double> air(1.0, 20'000.0);
  for (int i = 0; i < 200; ++i) {
    EngineParams p;
    p.c_start = c(rng);
    p.t_airborne = air(rng);
    const ContaminationPuff puff{{{0, 0}, 9.144}, 0, p.c_start, "u"};
    double prev = p.c_start;
    const auto end = static_cast<Millis>(p.t_airborne * 1200.0);
    for (Millis t = 0; t <= end; t += end / 97 + 1) {
      const double level = contamination_level(puff, p, t);
      ASSERT_LE(level, prev);
      ASSERT_NEAR(level, oracle::linear_level(p.c_start, p.t_airborne, t / 1000.0), 1e-9);
      prev = level;
    }
  }
}

TEST(PruneExpired, EmptyStaysEmpty) {
  EXPECT_TRUE(prune_expired({}, demo_params(), 1000).empty());
}

TEST(PruneExpired, PuffAgedAirborneTimeIsFreed) {
  ContaminationField f;
  f.add(puff_born(0));
  EXPECT_TRUE(prune_expired(f, demo_params(), 6000).empty());
  EXPECT_EQ(prune_expired(f, demo_params(), 5999).size(), 1u);
}

TEST(PruneExpired, KeepsOnlyLivePuffsInOrder) {
  ContaminationField f;
  f.add(puff_born(3000, "old"));    // aged 7 s at t = 10 s
  f.add(puff_born(8000, "young"));  // aged 2 s
  const auto pruned = prune_expired(f, demo_params(), 10'000);
  ASSERT_EQ(pruned.size(), 1u);
  EXPECT_EQ(pruned.puffs()[0], f.puffs()[1]);
}

TEST(PruneExpiredProperty, SurvivorsUnchangedAndOrdered) {
  std::mt19937 rng(23);
  std::uniform_int_distribution<Millis> born(0, 20'000);
  ContaminationField f;
  for (int i = 0; i < 300; ++i) f.add(puff_born(born(rng), std::to_string(i)));
  const auto pruned = prune_expired(f, demo_params(), 20'000);
  std::size_t cursor = 0;
  for (const auto& survivor : pruned.puffs()) {
    while (cursor < f.size() && !(f.puffs()[cursor] == survivor)) ++cursor;
    ASSERT_LT(cursor, f.size()) << "survivor missing or reordered";
    ++cursor;
  }
  for (const auto& puff : f.puffs()) {
    const bool alive = 20'000 - puff.born < 6000;
    const bool kept = std::find(pruned.puffs().begin(), pruned.puffs().end(), puff) !=
                      pruned.puffs().end();
    ASSERT_EQ(alive, kept);
  }
}

TEST(ActiveRedZones, EmptyWorld) {
  EXPECT_TRUE(active_red_zones({}, {}, EngineParams{}, 0).empty());
}

TEST(ActiveRedZones, UnhealthyPeerIsALiveZone) {
  const std::vector<PedestrianState> peers{walker("u", 4, 5, false), walker("h", 0, 0, true)};
  const auto zones = active_red_zones({}, peers, EngineParams{}, 0, "h");
  ASSERT_EQ(zones.size(), 1u);
  EXPECT_EQ(zones[0].kind, ZoneKind::LivePedestrian);
  EXPECT_EQ(zones[0].level, 100.0);
  EXPECT_EQ(zones[0].area, (Circle{{4, 5}, 9.144}));
}

TEST(ActiveRedZones, WalkingCarrierLeavesDecreasingTrail) {
  // Carrier walks east at 1.5 m/s for 5 updates (t = 0..4 s); queried at 4 s.
  const auto p = demo_params();
  ContaminationField field;
  PedestrianState carrier = walker("u", 0, 0, false);
  for (int t = 0; t < 5; ++t) {
    carrier.position = {1.5 * t, 0};
    field.add(*emit_puff(carrier, p, t * 1000));
    field = prune_expired(field, p, t * 1000);
  }
  const std::vector<PedestrianState> peers{carrier, walker("h", 0, 30, true)};
  const auto zones = active_red_zones(field, peers, p, 4000, "h");
  ASSERT_EQ(zones.size(), 6u);
  EXPECT_EQ(zones[0].kind, ZoneKind::LivePedestrian);
  // Newest first: ages 0..4 s -> 100, 83.3, 66.7, 50, 33.3.
  double prev = 101.0;
  for (int age = 0; age < 5; ++age) {
    const RedZone& z = zones[static_cast<std::size_t>(5 - age)];
    EXPECT_EQ(z.kind, ZoneKind::Trail);
    EXPECT_NEAR(z.level, oracle::linear_level(100.0, 6.0, age), 1e-9);
    EXPECT_LT(z.level, prev);
    const double alpha = z.level / p.c_start;
    EXPECT_GT(alpha, 0.0);
    EXPECT_LE(alpha, 1.0);
    prev = z.level;
  }
}

TEST(ActiveRedZones, OwnEmissionsAreExcluded) {
  const auto p = demo_params();
  ContaminationField field;
  field.add(puff_born(0, "me"));
  field.add(puff_born(0, "other"));
  const std::vector<PedestrianState> peers{walker("me", 0, 0, false)};
  const auto mine = active_red_zones(field, peers, p, 1000, "me");
  ASSERT_EQ(mine.size(), 1u);
  EXPECT_EQ(mine[0].source, "other");
  EXPECT_EQ(active_red_zones(field, peers, p, 1000, "someone").size(), 3u);
}

TEST(FieldProperty, OneEmitterAtOneHertzIsBounded) {
  for (double airborne : {1.0, 2.5, 6.0, 30.0}) {
    EngineParams p;
    p.t_airborne = airborne;
    ContaminationField field;
    PedestrianState carrier = walker("u", 0, 0, false);
    const auto bound = static_cast<std::size_t>(std::ceil(p.t_airborne / p.update_period));
    for (int t = 0; t < 120; ++t) {
      carrier.position.x = 1.4 * t;
      field.add(*emit_puff(carrier, p, t * 1000));
      field = prune_expired(field, p, t * 1000);
      ASSERT_LE(field.size(), bound) << "t_airborne " << airborne;
    }
  }
}

}  // namespace
}  // namespace pedsafe
