#include <memory>
#include <random>

#include <benchmark/benchmark.h>

#include "pedsafe/contamination.hpp"
#include "pedsafe/prediction.hpp"
#include "pedsafe/protocol.hpp"
#include "pedsafe/relay.hpp"

namespace {

using namespace pedsafe;

std::vector<RedZone> random_zones(std::size_t n, std::mt19937& rng) {
  std::uniform_real_distribution<double> coord(-200, 200);
  std::vector<RedZone> zones;
  for (std::size_t i = 0; i < n; ++i) {
    zones.push_back({{{coord(rng), coord(rng)}, 9.144}, 50.0, ZoneKind::Trail, "z"});
  }
  return zones;
}

void BM_Classify(benchmark::State& state) {
  std::mt19937 rng(1);
  const auto zones = random_zones(static_cast<std::size_t>(state.range(0)), rng);
  PedestrianState me;
  me.id = "me";
  me.speed = 1.4;
  me.theta = 0.3;
  const EngineParams p;
  for (auto _ : state) benchmark::DoNotOptimize(classify(me, zones, p));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Classify)->RangeMultiplier(4)->Range(1, 4096)->Complexity();

void BM_PruneExpired(benchmark::State& state) {
  EngineParams p;
  p.t_airborne = state.range(0) * 0.005;  // about half the field has expired
  ContaminationField field;
  for (int64_t i = 0; i < state.range(0); ++i) {
    field.add({{{0, 0}, 9.144}, i * 10, 100.0, "c"});
  }
  for (auto _ : state) benchmark::DoNotOptimize(prune_expired(field, p, state.range(0) * 10));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PruneExpired)->RangeMultiplier(4)->Range(16, 16384)->Complexity();

void BM_RelayTick(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  server::RelayConfig c;
  c.origin = GeoPoint{40.0, -83.0};
  c.params.t_airborne = 10.0;  // keeps the trail bounded across iterations
  server::Relay relay(c);
  std::vector<std::shared_ptr<server::InProcessConnection>> clients;
  for (int i = 0; i < n; ++i) {
    clients.push_back(std::make_shared<server::InProcessConnection>());
  }
  Millis now = 0;
  for (auto _ : state) {
    state.PauseTiming();
    for (int i = 0; i < n; ++i) {
      clients[i]->take_received();
      relay.submit(clients[i], protocol::encode_state({"p" + std::to_string(i), 40.0 + i * 1e-4,
                                                       -83.0, 1.0, 90.0, i % 2 == 0, now}));
    }
    state.ResumeTiming();
    benchmark::DoNotOptimize(relay.tick(now));
    now += 1000;
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_RelayTick)->RangeMultiplier(2)->Range(2, 64)->Complexity();

}  // namespace

BENCHMARK_MAIN();
