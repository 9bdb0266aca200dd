#include "pedsafe/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace pedsafe {

Engine::Engine(EngineParams params, std::optional<GeoPoint> origin) : params_(params) {
  params_.validate();
  if (origin) {
    validate_geo(*origin);
    frame_ = FrameOrigin{*origin};
  }
}

const PedestrianState& Engine::ingest(const StateMessage& m, bool fresh_session) {
  const FrameOrigin frame = frame_.value_or(FrameOrigin{GeoPoint{m.lat, m.lon}});
  std::optional<Millis> previous;
  if (auto it = last_stamp_.find(m.id); it != last_stamp_.end() && !fresh_session) {
    previous = it->second;
  }

  PedestrianState s = validate_state(m, frame, previous);
  if (!frame_) frame_ = frame;
  last_stamp_[s.id] = s.stamp;

  if (std::find(pending_.begin(), pending_.end(), s.id) == pending_.end()) {
    pending_.push_back(s.id);
  }
  auto it = std::find_if(states_.begin(), states_.end(),
                         [&](const PedestrianState& x) { return x.id == s.id; });
  if (it == states_.end()) {
    states_.push_back(std::move(s));
    return states_.back();
  }
  *it = std::move(s);
  return *it;
}

void Engine::advance(Millis now) {
  for (const auto& id : pending_) {
    const PedestrianState* s = find(id);
    if (s == nullptr) continue;
    if (auto puff = emit_puff(*s, params_, now)) field_.add(std::move(*puff));
  }
  pending_.clear();
  field_ = prune_expired(field_, params_, now);
}

bool Engine::remove(std::string_view id) {
  last_stamp_.erase(std::string(id));
  std::erase(pending_, id);
  return std::erase_if(states_, [&](const PedestrianState& s) { return s.id == id; }) > 0;
}

const PedestrianState* Engine::find(std::string_view id) const {
  auto it = std::find_if(states_.begin(), states_.end(),
                         [&](const PedestrianState& s) { return s.id == id; });
  return it == states_.end() ? nullptr : &*it;
}

std::vector<RedZone> Engine::red_zones_for(std::string_view id, Millis now) const {
  return active_red_zones(field_, states_, params_, now, id);
}

Evaluation Engine::evaluate(std::string_view id, Millis now) const {
  const PedestrianState* s = find(id);
  if (s == nullptr) throw std::out_of_range("unknown pedestrian " + std::string(id));
  Evaluation e;
  e.state = *s;
  e.zones = red_zones_for(id, now);
  e.warning = classify(*s, e.zones, params_);
  e.alert = alert_signal(e.warning);
  return e;
}

std::vector<Evaluation> Engine::evaluate_all(Millis now) const {
  std::vector<const PedestrianState*> order;
  for (const auto& s : states_) order.push_back(&s);
  std::sort(order.begin(), order.end(),
            [](const PedestrianState* a, const PedestrianState* b) { return a->id < b->id; });
  std::vector<Evaluation> out;
  out.reserve(order.size());
  for (const auto* s : order) out.push_back(evaluate(s->id, now));
  return out;
}

}  // namespace pedsafe
