#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pedsafe/relay.hpp"

namespace pedsafe::server {

inline constexpr const char* kStreamPath = "/v1/stream";

struct ServeOptions {
  std::string bind = "0.0.0.0";
  unsigned short port = 8700;  // 0 picks an ephemeral port
  double tick_hz = 1.0;
};

/// WebSocket front end for a Relay: one text frame per message on
/// /v1/stream, ticks driven by a wall-clock timer. All socket work and
/// relay ticks run on a single I/O thread.
class WsServer {
 public:
  WsServer(Relay& relay, ServeOptions options);
  ~WsServer();
  WsServer(const WsServer&) = delete;
  WsServer& operator=(const WsServer&) = delete;

  /// Port actually bound (differs from options.port when that was 0).
  unsigned short port() const;

  /// Blocks until stop() is called from another thread.
  void run();
  /// Runs on a background thread.
  void start();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Small WebSocket client with a background read loop; used by the agents
/// driver and tests.
class WsClient {
 public:
  /// Connects and completes the handshake; throws std::runtime_error.
  WsClient(const std::string& host, unsigned short port, const std::string& path = kStreamPath);
  ~WsClient();
  WsClient(const WsClient&) = delete;
  WsClient& operator=(const WsClient&) = delete;

  void send(std::string text);

  /// Waits up to `timeout` for the next inbound frame.
  std::optional<std::string> receive(std::chrono::milliseconds timeout);
  /// Everything received so far, without waiting.
  std::vector<std::string> drain();

  bool connected() const;
  void close();

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

/// Splits "ws://host:port/path" into its parts; throws std::invalid_argument.
struct WsUrl {
  std::string host;
  unsigned short port = 80;
  std::string path = "/";
};
WsUrl parse_ws_url(const std::string& url);

}  // namespace pedsafe::server
