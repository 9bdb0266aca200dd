#include "pedsafe/self_check.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <random>

#include "pedsafe/relay.hpp"

namespace pedsafe {

namespace {

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

CheckResult check_geodesy_round_trip(std::mt19937& rng) {
  std::uniform_real_distribution<double> lat(-60.0, 60.0);
  std::uniform_real_distribution<double> lon(-179.0, 179.0);
  std::uniform_real_distribution<double> off(-0.08, 0.08);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const FrameOrigin f{{lat(rng), lon(rng)}};
    const GeoPoint p{f.origin.lat + off(rng), f.origin.lon + off(rng)};
    const GeoPoint back = to_geo(to_local(p, f), f);
    worst = std::max({worst, std::abs(back.lat - p.lat), std::abs(back.lon - p.lon)});
  }
  return {"geodesy round trip", worst < 1e-9, "max error " + short_number(worst) + " deg"};
}

CheckResult check_decay_monotone() {
  EngineParams p;
  p.t_airborne = 6.0;
  const ContaminationPuff puff{{{0, 0}, p.bubble_radius}, 0, p.c_start, "x"};
  double prev = contamination_level(puff, p, 0);
  bool ok = prev == p.c_start;
  for (Millis t = 1; t <= 8000; t += 7) {
    const double c = contamination_level(puff, p, t);
    ok = ok && c <= prev;
    prev = c;
  }
  ok = ok && contamination_level(puff, p, 6000) == 0.0;
  return {"decay monotone and zero at t_airborne", ok, ""};
}

CheckResult check_prediction_affine(std::mt19937& rng) {
  std::uniform_real_distribution<double> coord(-500.0, 500.0);
  std::uniform_real_distribution<double> speed(0.0, kSpeedCapMps);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::uniform_real_distribution<double> dt(0.0, 3.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    PedestrianState s;
    s.position = {coord(rng), coord(rng)};
    s.speed = speed(rng);
    s.theta = angle(rng);
    const double a = dt(rng);
    const double b = dt(rng);
    PedestrianState mid = s;
    mid.position = predict_position(s, a);
    const LocalPoint direct = predict_position(s, a + b);
    const LocalPoint chained = predict_position(mid, b);
    worst = std::max(worst, distance(direct, chained));
  }
  return {"prediction affine in dt", worst < 1e-9, "max error " + short_number(worst) + " m"};
}

CheckResult check_classify_properties(std::mt19937& rng) {
  std::uniform_real_distribution<double> coord(-40.0, 40.0);
  std::uniform_real_distribution<double> speed(0.0, 3.0);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  const EngineParams p;
  int failures = 0;
  for (int i = 0; i < 500; ++i) {
    PedestrianState s;
    s.position = {coord(rng), coord(rng)};
    s.speed = speed(rng);
    s.theta = angle(rng);
    std::vector<RedZone> zones;
    for (int k = 0; k < 4; ++k) {
      zones.push_back({{{coord(rng), coord(rng)}, p.bubble_radius}, 50.0, ZoneKind::Trail, "z"});
    }
    const WarningState full = classify(s, zones, p);
    if (full.level == WarningLevel::AreaSafe) {
      // Removing zones can never create a hazard.
      zones.pop_back();
      if (classify(s, zones, p).level != WarningLevel::AreaSafe) ++failures;
    }
    const bool overlap_now = std::any_of(zones.begin(), zones.end(), [&](const RedZone& z) {
      return circles_intersect(bubble_of(s, p), z.area);
    });
    if (overlap_now && classify(s, zones, p).level != WarningLevel::InRedZone) ++failures;
  }
  return {"classify precedence and monotone safety", failures == 0,
          std::to_string(failures) + " failures"};
}

CheckResult check_fan_out() {
  server::Relay relay({EngineParams{}, false, GeoPoint{40.0, -83.0}});
  constexpr int kClients = 5;
  constexpr int kTicks = 5;
  std::vector<std::shared_ptr<server::InProcessConnection>> clients;
  for (int i = 0; i < kClients; ++i) clients.push_back(std::make_shared<server::InProcessConnection>());
  std::size_t deliveries = 0;
  for (int t = 0; t < kTicks; ++t) {
    for (int i = 0; i < kClients; ++i) {
      const StateMessage m{"c" + std::to_string(i), 40.0 + i * 1e-4, -83.0, 1.0, 90.0, true,
                           t * 1000};
      relay.submit(clients[i], protocol::encode_state(m));
    }
    deliveries += relay.tick(t * 1000).deliveries;
  }
  bool self_echo = false;
  for (int i = 0; i < kClients; ++i) {
    for (const auto& text : clients[i]->received()) {
      self_echo = self_echo || protocol::decode_state(text).id == "c" + std::to_string(i);
    }
  }
  const std::size_t expected = static_cast<std::size_t>(kClients - 1) * kClients * kTicks;
  return {"relay fan-out", deliveries == expected && !self_echo,
          std::to_string(deliveries) + "/" + std::to_string(expected) + " deliveries"};
}

CheckResult check_scenario(const scenario::ScenarioScript& script) {
  const auto first = scenario::run(script);
  const auto second = scenario::run(script);
  const bool deterministic =
      scenario::trace_to_ndjson(first) == scenario::trace_to_ndjson(second);

  const auto advisories = scenario::replay_through_relay(script);
  bool equivalent = true;
  for (const auto& track : script.tracks) {
    const auto direct = first.levels_of(track.id);
    auto it = advisories.find(track.id);
    if (it == advisories.end() || it->second.size() != direct.size()) {
      equivalent = false;
      continue;
    }
    for (std::size_t i = 0; i < direct.size(); ++i) {
      equivalent = equivalent && it->second[i].state == direct[i];
    }
  }
  return {"scenario " + script.name + " deterministic and relay-equivalent",
          deterministic && equivalent,
          std::string(deterministic ? "" : "non-deterministic ") +
              (equivalent ? "" : "relay diverges")};
}

}  // namespace

std::vector<CheckResult> run_self_checks(std::uint32_t seed,
                                         const std::vector<scenario::ScenarioScript>& scenarios) {
  std::mt19937 rng(seed);
  std::vector<CheckResult> out;
  out.push_back(check_geodesy_round_trip(rng));
  out.push_back(check_decay_monotone());
  out.push_back(check_prediction_affine(rng));
  out.push_back(check_classify_properties(rng));
  out.push_back(check_fan_out());
  for (const auto& s : scenarios) out.push_back(check_scenario(s));
  return out;
}

}  // namespace pedsafe
