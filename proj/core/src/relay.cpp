#include "pedsafe/relay.hpp"

#include <algorithm>
#include <cmath>

#include "pedsafe/error.hpp"

namespace pedsafe::server {

std::shared_ptr<Connection> SessionRegistry::claim(const std::string& id,
                                                   std::shared_ptr<Connection> connection,
                                                   Millis now) {
  std::lock_guard lock(mutex_);
  auto [it, inserted] = sessions_.try_emplace(id);
  std::shared_ptr<Connection> displaced;
  if (!inserted && it->second.connection != connection) displaced = it->second.connection;
  if (inserted || displaced) {
    it->second = ClientSession{id, now, std::move(connection), false};
  } else {
    it->second.last_seen = std::max(it->second.last_seen, now);
  }
  return displaced;
}

std::optional<std::string> SessionRegistry::id_of(const Connection* connection) const {
  std::lock_guard lock(mutex_);
  for (const auto& [id, s] : sessions_) {
    if (s.connection.get() == connection) return id;
  }
  return std::nullopt;
}

std::optional<ClientSession> SessionRegistry::find(std::string_view id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return std::nullopt;
  return it->second;
}

void SessionRegistry::touch(std::string_view id, Millis now) {
  std::lock_guard lock(mutex_);
  if (auto it = sessions_.find(id); it != sessions_.end()) {
    it->second.last_seen = std::max(it->second.last_seen, now);
  }
}

void SessionRegistry::mark_failed(std::string_view id) {
  std::lock_guard lock(mutex_);
  if (auto it = sessions_.find(id); it != sessions_.end()) it->second.failed = true;
}

bool SessionRegistry::remove(std::string_view id) {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return false;
  sessions_.erase(it);
  return true;
}

std::vector<ClientSession> SessionRegistry::take_stale(Millis now, Millis timeout_ms) {
  std::lock_guard lock(mutex_);
  std::vector<ClientSession> out;
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    if (now - it->second.last_seen > timeout_ms) {
      out.push_back(std::move(it->second));
      it = sessions_.erase(it);
    } else {
      ++it;
    }
  }
  return out;
}

std::vector<ClientSession> SessionRegistry::take_failed() {
  std::lock_guard lock(mutex_);
  std::vector<ClientSession> out;
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    if (it->second.failed) {
      out.push_back(std::move(it->second));
      it = sessions_.erase(it);
    } else {
      ++it;
    }
  }
  return out;
}

std::vector<ClientSession> SessionRegistry::snapshot() const {
  std::lock_guard lock(mutex_);
  std::vector<ClientSession> out;
  out.reserve(sessions_.size());
  for (const auto& [id, s] : sessions_) out.push_back(s);
  return out;
}

std::size_t SessionRegistry::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

std::size_t broadcast(const ClientSession& from, const StateMessage& m, SessionRegistry& registry,
                      Millis now) {
  registry.touch(from.id, now);
  const std::string text = protocol::encode_state(m);
  std::size_t delivered = 0;
  // Sends happen on a snapshot; the registry lock is never held here.
  for (const auto& peer : registry.snapshot()) {
    if (peer.id == from.id || peer.failed) continue;
    if (peer.connection && peer.connection->send(text)) {
      ++delivered;
    } else {
      registry.mark_failed(peer.id);
    }
  }
  return delivered;
}

std::vector<std::string> evict_stale(SessionRegistry& registry, Millis now,
                                     const EngineParams& p) {
  const auto timeout_ms = static_cast<Millis>(std::llround(p.stale_timeout * 1000.0));
  std::vector<std::string> ids;
  for (auto& s : registry.take_stale(now, timeout_ms)) {
    if (s.connection) s.connection->close();
    ids.push_back(std::move(s.id));
  }
  return ids;
}

Relay::Relay(RelayConfig config) : config_(config), engine_(config.params, config.origin) {}

void Relay::submit(std::shared_ptr<Connection> from, std::string text) {
  std::lock_guard lock(inbox_mutex_);
  inbox_.push_back({std::move(from), std::move(text), false});
}

void Relay::disconnect(std::shared_ptr<Connection> connection) {
  std::lock_guard lock(inbox_mutex_);
  inbox_.push_back({std::move(connection), {}, true});
}

void Relay::drop_all_sessions() {
  {
    std::lock_guard lock(inbox_mutex_);
    inbox_.clear();
  }
  for (const auto& s : registry_.snapshot()) drop_session(s.id, false);
}

void Relay::drop_session(const std::string& id, bool close_connection) {
  if (close_connection) {
    if (auto s = registry_.find(id); s && s->connection) s->connection->close();
  }
  registry_.remove(id);
  engine_.remove(id);
}

TickReport Relay::tick(Millis now) {
  TickReport report;
  report.now = now;

  std::vector<Inbound> batch;
  {
    std::lock_guard lock(inbox_mutex_);
    batch.swap(inbox_);
  }

  // Latest accepted message per sender, in order of first arrival this tick.
  std::vector<std::pair<std::string, StateMessage>> accepted;
  for (auto& in : batch) {
    const auto claimed = registry_.id_of(in.from.get());
    if (in.disconnect) {
      if (claimed) {
        std::erase_if(accepted, [&](const auto& a) { return a.first == *claimed; });
        drop_session(*claimed, false);
      }
      continue;
    }
    try {
      StateMessage m = protocol::decode_state(in.text);
      if (claimed && *claimed != m.id) {
        report.rejected.push_back("connection bound to '" + *claimed + "' sent id '" + m.id + "'");
        continue;
      }
      // Last writer wins: a new connection for a known id starts a fresh
      // session, so its stamps are not compared with the old one's.
      engine_.ingest(m, !claimed.has_value());
      if (auto displaced = registry_.claim(m.id, in.from, now)) displaced->close();
      auto it = std::find_if(accepted.begin(), accepted.end(),
                             [&](const auto& a) { return a.first == m.id; });
      if (it == accepted.end()) {
        accepted.emplace_back(m.id, std::move(m));
      } else {
        it->second = std::move(m);
      }
    } catch (const protocol::ProtocolError& e) {
      report.rejected.push_back(e.what());
    } catch (const ValidationError& e) {
      report.rejected.push_back(e.what());
    }
  }

  report.accepted = accepted.size();
  for (const auto& [id, m] : accepted) {
    if (auto session = registry_.find(id)) {
      report.deliveries += broadcast(*session, m, registry_, now);
    }
  }

  for (auto& s : registry_.take_failed()) {
    if (s.connection) s.connection->close();
    engine_.remove(s.id);
    report.evicted.push_back(std::move(s.id));
  }
  for (auto& id : evict_stale(registry_, now, config_.params)) {
    engine_.remove(id);
    report.evicted.push_back(std::move(id));
  }

  engine_.advance(now);

  if (config_.advisory && engine_.frame()) {
    for (const auto& session : registry_.snapshot()) {
      if (engine_.find(session.id) == nullptr) continue;
      auto advisory = protocol::make_advisory(engine_.evaluate(session.id, now), *engine_.frame());
      if (!session.connection || !session.connection->send(protocol::encode_advisory(advisory))) {
        registry_.mark_failed(session.id);
      }
      report.advisories.push_back(std::move(advisory));
    }
  }
  return report;
}

bool InProcessConnection::send(std::string_view text) {
  std::lock_guard lock(mutex_);
  if (broken_ || closed_) return false;
  received_.emplace_back(text);
  return true;
}

}  // namespace pedsafe::server
