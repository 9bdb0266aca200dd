// pedsafe: relay server, deterministic scenario replay, scripted agents and
// self-checks.

#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <thread>

#include <CLI11.hpp>

#include "pedsafe/error.hpp"
#include "pedsafe/relay.hpp"
#include "pedsafe/scenario.hpp"
#include "pedsafe/self_check.hpp"
#include "pedsafe/ws_transport.hpp"

namespace {

namespace fs = std::filesystem;
using namespace pedsafe;

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
}

std::atomic<server::WsServer*> g_server{nullptr};

void on_signal(int) {
  // stop() only posts to the io_context; run() returns on the main thread.
  if (auto* s = g_server.load()) s->stop();
}

int serve(unsigned short port, bool advisory, double tick_hz, double stale_timeout_s,
          const std::string& params_path) {
  server::RelayConfig config;
  if (!params_path.empty()) {
    auto overrides = scenario::load_params(params_path);
    config.params = overrides.params;
    config.origin = overrides.origin;
  }
  config.params.stale_timeout = stale_timeout_s;
  config.params.update_period = 1.0 / tick_hz;
  config.params.validate();
  config.advisory = advisory;

  server::Relay relay(config);
  server::WsServer ws(relay, {"0.0.0.0", port, tick_hz});
  std::cerr << "pedsafe relay listening on ws://0.0.0.0:" << ws.port() << server::kStreamPath
            << (advisory ? " (advisory mode)" : "") << "\n";
  g_server = &ws;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  ws.run();
  g_server = nullptr;
  return 0;
}

int replay(const std::string& scenario_path, const std::string& trace_path,
           const std::string& geojson_path, const std::string& params_path) {
  auto script = scenario::load_scenario(scenario_path);
  if (!params_path.empty()) {
    auto overrides = scenario::load_params(params_path, script.params);
    script.params = overrides.params;
    if (overrides.origin) script.origin = *overrides.origin;
  }
  const auto trace = scenario::run(script);
  const std::string ndjson = scenario::trace_to_ndjson(trace);
  if (trace_path.empty()) {
    std::cout << ndjson;
  } else {
    write_file(trace_path, ndjson);
  }
  if (!geojson_path.empty()) write_file(geojson_path, scenario::trace_to_geojson(trace, script));
  return 0;
}

int agents(const std::string& scenario_path, const std::string& url) {
  const auto script = scenario::load_scenario(scenario_path);
  const auto target = server::parse_ws_url(url);

  scenario::Simulation sim(script);  // message generation only
  Engine local(script.params, script.origin);
  std::set<std::string> own;
  std::vector<std::pair<const scenario::Track*, std::unique_ptr<server::WsClient>>> clients;
  for (const auto& track : script.tracks) {
    if (track.waypoints.empty()) continue;  // controlled by a human
    own.insert(track.id);
    clients.emplace_back(&track,
                         std::make_unique<server::WsClient>(target.host, target.port, target.path));
  }

  const auto period = std::chrono::duration<double>(script.params.update_period);
  auto next = std::chrono::steady_clock::now();
  for (std::size_t tick = 0; tick * script.params.update_period <= script.end_time() + 1e-9;
       ++tick) {
    const Millis now = static_cast<Millis>(tick * script.params.update_period * 1000.0);
    for (auto& [track, client] : clients) {
      const StateMessage m = sim.message_for(*track, tick);
      client->send(protocol::encode_state(m));
      local.ingest(m);
    }
    next += std::chrono::duration_cast<std::chrono::steady_clock::duration>(period);
    std::this_thread::sleep_until(next);

    for (auto& [track, client] : clients) {
      for (const auto& text : client->drain()) {
        try {
          const std::string type = protocol::message_type(text);
          if (type == "advisory") {
            std::cout << "advisory " << text << "\n";
          } else if (type == "state") {
            const StateMessage peer = protocol::decode_state(text);
            if (!own.contains(peer.id)) local.ingest(peer);
          }
        } catch (const std::exception& e) {
          std::cerr << "dropped inbound frame: " << e.what() << "\n";
        }
      }
    }
    local.advance(now);
    for (const auto& e : local.evaluate_all(now)) {
      if (!own.contains(e.state.id)) continue;
      std::cout << "t=" << tick << " " << e.state.id << " " << to_string(e.warning.level) << " "
                << to_string(e.alert) << "\n";
    }
    std::cout.flush();
  }
  return 0;
}

int check(const std::string& scenario_dir, std::uint32_t seed) {
  std::vector<scenario::ScenarioScript> scripts;
  if (!scenario_dir.empty() && fs::is_directory(scenario_dir)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(scenario_dir)) {
      if (entry.path().string().ends_with(".scenario.json")) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      auto s = scenario::load_scenario(f);
      if (!s.controlled_id) scripts.push_back(std::move(s));
    }
  }
  int failed = 0;
  for (const auto& r : run_self_checks(seed, scripts)) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (!r.detail.empty()) std::cout << " (" << r.detail << ")";
    std::cout << "\n";
    failed += r.passed ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pedsafe: pedestrian social-distancing relay and replay engine"};
  app.require_subcommand(1);

  auto* serve_cmd = app.add_subcommand("serve", "run the WebSocket relay");
  unsigned short port = 8700;
  bool advisory = false;
  double tick_hz = 1.0;
  double stale_timeout_s = 5.0;
  std::string params_path;
  serve_cmd->add_option("--port", port, "listen port")->capture_default_str();
  serve_cmd->add_flag("--advisory", advisory, "compute and send per-client advisories");
  serve_cmd->add_option("--tick-hz", tick_hz, "tick rate")->capture_default_str()
      ->check(CLI::PositiveNumber);
  serve_cmd->add_option("--stale-timeout-s", stale_timeout_s, "evict silent clients after this")
      ->capture_default_str()->check(CLI::PositiveNumber);
  serve_cmd->add_option("--params", params_path, "engine parameter overrides (JSON)")
      ->check(CLI::ExistingFile);

  auto* replay_cmd = app.add_subcommand("replay", "replay a scenario on a logical clock");
  std::string scenario_path;
  std::string trace_path;
  std::string geojson_path;
  std::string replay_params;
  replay_cmd->add_option("--scenario", scenario_path, "scenario file")->required()
      ->check(CLI::ExistingFile);
  replay_cmd->add_option("--trace", trace_path, "write NDJSON trace here (default stdout)");
  replay_cmd->add_option("--geojson", geojson_path, "write GeoJSON here");
  replay_cmd->add_option("--params", replay_params, "engine parameter overrides (JSON)")
      ->check(CLI::ExistingFile);

  auto* agents_cmd = app.add_subcommand("agents", "drive scripted tracks against a live relay");
  std::string agents_scenario;
  std::string url;
  agents_cmd->add_option("--scenario", agents_scenario, "scenario file")->required()
      ->check(CLI::ExistingFile);
  agents_cmd->add_option("--connect", url, "relay URL, e.g. ws://localhost:8700/v1/stream")
      ->required();

  auto* check_cmd = app.add_subcommand("check", "run invariant self-tests");
  std::string scenario_dir = PEDSAFE_SCENARIO_DIR;
  std::uint32_t seed = 20201103;
  check_cmd->add_option("--scenario-dir", scenario_dir, "also check every *.scenario.json here")
      ->capture_default_str();
  check_cmd->add_option("--seed", seed, "random seed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve_cmd) return serve(port, advisory, tick_hz, stale_timeout_s, params_path);
    if (*replay_cmd) return replay(scenario_path, trace_path, geojson_path, replay_params);
    if (*agents_cmd) return agents(agents_scenario, url);
    if (*check_cmd) return check(scenario_dir, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
