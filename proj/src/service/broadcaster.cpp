#include "fuguescope/service/broadcaster.hpp"

#include <algorithm>
#include <stdexcept>

namespace fuguescope::service {

Subscription::Subscription(std::size_t capacity) : capacity_(std::max<std::size_t>(1, capacity)) {}

bool Subscription::push(Batch batch) {
  std::function<void()> notify;
  {
    std::lock_guard lock(mu_);
    if (closed_) return false;
    if (queue_.size() >= capacity_) {
      closed_ = true;
      overflowed_ = true;
      queue_.clear();
    } else {
      queue_.push_back(std::move(batch));
    }
    notify = notify_;
  }
  cv_.notify_all();
  if (notify) notify();
  return !overflowed();
}

std::optional<Batch> Subscription::try_pop() {
  std::lock_guard lock(mu_);
  if (queue_.empty()) return std::nullopt;
  Batch b = std::move(queue_.front());
  queue_.pop_front();
  return b;
}

std::optional<Batch> Subscription::pop_wait(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, timeout, [&] { return !queue_.empty() || closed_; });
  if (queue_.empty()) return std::nullopt;
  Batch b = std::move(queue_.front());
  queue_.pop_front();
  return b;
}

void Subscription::close() {
  std::function<void()> notify;
  {
    std::lock_guard lock(mu_);
    if (closed_) return;
    closed_ = true;
    notify = notify_;
  }
  cv_.notify_all();
  if (notify) notify();
}

bool Subscription::closed() const {
  std::lock_guard lock(mu_);
  return closed_;
}

bool Subscription::overflowed() const {
  std::lock_guard lock(mu_);
  return overflowed_;
}

std::size_t Subscription::size() const {
  std::lock_guard lock(mu_);
  return queue_.size();
}

void Subscription::set_notify(std::function<void()> notify) {
  std::lock_guard lock(mu_);
  notify_ = std::move(notify);
}

void SceneState::apply(const DrawMessage& msg) {
  const auto& d = msg.data;
  switch (msg.kind) {
    case MessageKind::kGridLine: {
      const int midi = d.value("midi", -1);
      if (d.value("lit", false)) {
        lit_lines_[midi] = d;
      } else {
        lit_lines_.erase(midi);
      }
      break;
    }
    case MessageKind::kSegmentState:
      segments_[d.value("voice", std::string())] = d;
      break;
    case MessageKind::kTriad: triad_ = d; break;
    case MessageKind::kCircleState: circle_ = d; break;
    case MessageKind::kLetters: letters_ = d; break;
    case MessageKind::kClock: clock_ = d; break;
    case MessageKind::kFollowerHealth: health_ = d; break;
    case MessageKind::kOverrideMarker: override_ = d; break;
    case MessageKind::kCue: cues_.push_back(d); break;
    default: break;
  }
}

nlohmann::json SceneState::to_json() const {
  nlohmann::json lit = nlohmann::json::array();
  for (const auto& [midi, line] : lit_lines_) lit.push_back(line);
  nlohmann::json segs = nlohmann::json::object();
  for (const auto& [voice, s] : segments_) segs[voice] = s;
  return {{"lit_lines", lit}, {"segments", segs}, {"triad", triad_},       {"circle", circle_},
          {"letters", letters_}, {"clock", clock_}, {"follower_health", health_},
          {"override", override_}, {"cues", cues_},   {"config", config_}};
}

Broadcaster::Broadcaster(std::size_t default_capacity) : default_capacity_(default_capacity) {}

std::shared_ptr<Subscription> Broadcaster::subscribe(std::optional<std::size_t> capacity) {
  auto sub = std::make_shared<Subscription>(capacity.value_or(default_capacity_));
  std::lock_guard lock(mu_);
  DrawMessage snap;
  snap.seq = seq_;
  snap.kind = MessageKind::kSnapshot;
  snap.beats = last_beats_;
  snap.data = scene_.to_json();
  sub->push(std::make_shared<const std::string>(encode(snap) + "\n"));
  subs_.push_back(sub);
  return sub;
}

void Broadcaster::unsubscribe(const std::shared_ptr<Subscription>& sub) {
  std::lock_guard lock(mu_);
  subs_.erase(std::remove(subs_.begin(), subs_.end(), sub), subs_.end());
}

void Broadcaster::publish(std::vector<DrawMessage>& batch) {
  if (batch.empty()) return;
  std::vector<Sink> sinks;
  {
    std::lock_guard lock(mu_);
    for (DrawMessage& m : batch) m.seq = ++seq_;
    sinks = deliver_locked(batch);
  }
  for (const Sink& s : sinks) s(batch);
}

void Broadcaster::relay(const std::vector<DrawMessage>& batch) {
  if (batch.empty()) return;
  std::vector<Sink> sinks;
  {
    std::lock_guard lock(mu_);
    std::uint64_t seq = seq_;
    for (const DrawMessage& m : batch) {
      if (m.seq <= seq) throw std::invalid_argument("relay: sequence numbers must increase");
      seq = m.seq;
    }
    seq_ = seq;
    sinks = deliver_locked(batch);
  }
  for (const Sink& s : sinks) s(batch);
}

std::vector<Broadcaster::Sink> Broadcaster::deliver_locked(const std::vector<DrawMessage>& batch) {
  for (const DrawMessage& m : batch) scene_.apply(m);
  last_beats_ = batch.back().beats;
  auto text = std::make_shared<const std::string>(to_ndjson(batch));
  for (auto it = subs_.begin(); it != subs_.end();) {
    if (!(*it)->push(text)) {
      if ((*it)->overflowed()) ++dropped_;
      it = subs_.erase(it);
    } else {
      ++it;
    }
  }
  return sinks_;
}

void Broadcaster::close_all() {
  std::lock_guard lock(mu_);
  for (auto& s : subs_) s->close();
  subs_.clear();
}

void Broadcaster::add_sink(Sink sink) {
  std::lock_guard lock(mu_);
  sinks_.push_back(std::move(sink));
}

void Broadcaster::set_config(nlohmann::json config) {
  std::lock_guard lock(mu_);
  scene_.set_config(std::move(config));
}

std::uint64_t Broadcaster::last_seq() const {
  std::lock_guard lock(mu_);
  return seq_;
}

std::size_t Broadcaster::subscriber_count() const {
  std::lock_guard lock(mu_);
  return subs_.size();
}

std::uint64_t Broadcaster::dropped_clients() const {
  std::lock_guard lock(mu_);
  return dropped_;
}

DrawMessage Broadcaster::snapshot(double wall_time) const {
  std::lock_guard lock(mu_);
  DrawMessage snap;
  snap.seq = seq_;
  snap.kind = MessageKind::kSnapshot;
  snap.beats = last_beats_;
  snap.wall_time = wall_time;
  snap.data = scene_.to_json();
  return snap;
}

std::string to_ndjson(const std::vector<DrawMessage>& batch) {
  std::string out;
  for (const DrawMessage& m : batch) {
    out += encode(m);
    out += '\n';
  }
  return out;
}

}  // namespace fuguescope::service
