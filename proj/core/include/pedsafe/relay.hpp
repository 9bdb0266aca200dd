#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pedsafe/engine.hpp"
#include "pedsafe/protocol.hpp"

namespace pedsafe::server {

/// Outbound half of a client transport. Implementations must be safe to
/// call from the relay's tick thread.
class Connection {
 public:
  virtual ~Connection() = default;
  /// Returns false if the message could not be handed to the transport.
  virtual bool send(std::string_view text) = 0;
  virtual void close() {}
};

struct ClientSession {
  std::string id;
  Millis last_seen = 0;
  std::shared_ptr<Connection> connection;
  bool failed = false;
};

/// One active session per id, guarded for concurrent access.
class SessionRegistry {
 public:
  /// Binds `id` to `connection`. If another connection held the id, it is
  /// displaced and returned so the caller can close it.
  std::shared_ptr<Connection> claim(const std::string& id, std::shared_ptr<Connection> connection,
                                    Millis now);

  std::optional<std::string> id_of(const Connection* connection) const;
  std::optional<ClientSession> find(std::string_view id) const;
  void touch(std::string_view id, Millis now);
  void mark_failed(std::string_view id);
  bool remove(std::string_view id);

  /// Sessions silent for longer than `timeout_ms`, removed from the registry.
  std::vector<ClientSession> take_stale(Millis now, Millis timeout_ms);
  std::vector<ClientSession> take_failed();

  /// Copy of all sessions, ordered by id.
  std::vector<ClientSession> snapshot() const;
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, ClientSession, std::less<>> sessions_;
};

/// Sends the canonical encoding of `m` to every other session. A failed
/// send marks that receiver for eviction and does not stop delivery to the
/// rest. Returns the number of successful deliveries.
std::size_t broadcast(const ClientSession& from, const StateMessage& m, SessionRegistry& registry,
                      Millis now);

/// Removes sessions silent for more than the stale timeout; returns their ids.
std::vector<std::string> evict_stale(SessionRegistry& registry, Millis now,
                                     const EngineParams& p);

struct RelayConfig {
  EngineParams params;
  bool advisory = false;
  std::optional<GeoPoint> origin;  // otherwise fixed by the first accepted message
};

struct TickReport {
  Millis now = 0;
  std::size_t accepted = 0;
  std::size_t deliveries = 0;
  std::vector<std::string> rejected;  // one reason per dropped message
  std::vector<std::string> evicted;
  std::vector<protocol::AdvisoryMessage> advisories;
};

/// Cloud relay: receive loops submit raw frames from any thread; a single
/// sequencer calls tick() to validate, fan out, evict, and (optionally)
/// compute per-client advisories.
class Relay {
 public:
  explicit Relay(RelayConfig config);

  const RelayConfig& config() const { return config_; }

  void submit(std::shared_ptr<Connection> from, std::string text);
  void disconnect(std::shared_ptr<Connection> connection);

  TickReport tick(Millis now);

  /// Forgets every session and queued message without closing connections.
  /// For transport shutdown, once no more I/O can happen.
  void drop_all_sessions();

  SessionRegistry& registry() { return registry_; }
  const SessionRegistry& registry() const { return registry_; }
  const Engine& engine() const { return engine_; }

 private:
  struct Inbound {
    std::shared_ptr<Connection> from;
    std::string text;  // empty with disconnect = true
    bool disconnect = false;
  };

  void drop_session(const std::string& id, bool close_connection);

  RelayConfig config_;
  Engine engine_;
  SessionRegistry registry_;
  std::mutex inbox_mutex_;
  std::vector<Inbound> inbox_;
};

/// Loopback transport for tests and the deterministic harness.
class InProcessConnection : public Connection {
 public:
  bool send(std::string_view text) override;
  void close() override { closed_ = true; }

  /// Subsequent sends fail, as if the peer vanished.
  void break_link() { broken_ = true; }

  const std::vector<std::string>& received() const { return received_; }
  std::vector<std::string> take_received() { return std::exchange(received_, {}); }
  bool closed() const { return closed_; }

 private:
  std::mutex mutex_;
  std::vector<std::string> received_;
  bool broken_ = false;
  bool closed_ = false;
};

}  // namespace pedsafe::server
