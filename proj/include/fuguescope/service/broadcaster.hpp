#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "fuguescope/service/message.hpp"

namespace fuguescope::service {

using Batch = std::shared_ptr<const std::string>;

// Per-client bounded queue of NDJSON batches. Overflowing closes it; the
// client is dropped rather than slowing the engine.
class Subscription {
 public:
  explicit Subscription(std::size_t capacity);

  // False when closed or just closed by overflow.
  bool push(Batch batch);
  std::optional<Batch> try_pop();
  std::optional<Batch> pop_wait(std::chrono::milliseconds timeout);
  void close();
  bool closed() const;
  bool overflowed() const;
  std::size_t size() const;
  // Called (outside the lock) after every successful push and on close.
  void set_notify(std::function<void()> notify);

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Batch> queue_;
  std::size_t capacity_;
  bool closed_ = false;
  bool overflowed_ = false;
  std::function<void()> notify_;
};

// Latest state implied by the stream, for late joiners.
class SceneState {
 public:
  void apply(const DrawMessage& msg);
  nlohmann::json to_json() const;
  void set_config(nlohmann::json config) { config_ = std::move(config); }

 private:
  std::map<int, nlohmann::json> lit_lines_;
  std::map<std::string, nlohmann::json> segments_;
  nlohmann::json triad_ = nullptr;
  nlohmann::json circle_ = nullptr;
  nlohmann::json letters_ = nullptr;
  nlohmann::json clock_ = nullptr;
  nlohmann::json health_ = nullptr;
  nlohmann::json override_ = nullptr;
  nlohmann::json cues_ = nlohmann::json::array();
  nlohmann::json config_ = nlohmann::json::object();
};

// Assigns sequence numbers and fans each engine frame out to subscribers as
// one NDJSON batch. All subscribers receive byte-identical batches.
class Broadcaster {
 public:
  using Sink = std::function<void(const std::vector<DrawMessage>&)>;

  explicit Broadcaster(std::size_t default_capacity = 256);

  // New subscriber; its first batch is a snapshot whose seq equals the last
  // published seq.
  std::shared_ptr<Subscription> subscribe(std::optional<std::size_t> capacity = std::nullopt);
  void unsubscribe(const std::shared_ptr<Subscription>& sub);

  // Stamps seq on every message, then delivers. Empty batches are ignored.
  void publish(std::vector<DrawMessage>& batch);
  // Delivers already-stamped messages (replay). Throws std::invalid_argument
  // unless seq continues strictly increasing.
  void relay(const std::vector<DrawMessage>& batch);
  // Flags every subscription closed (end of stream).
  void close_all();

  void add_sink(Sink sink);
  void set_config(nlohmann::json config);

  std::uint64_t last_seq() const;
  std::size_t subscriber_count() const;
  std::uint64_t dropped_clients() const;
  DrawMessage snapshot(double wall_time = 0.0) const;

 private:
  std::vector<Sink> deliver_locked(const std::vector<DrawMessage>& batch);

  mutable std::mutex mu_;
  std::size_t default_capacity_;
  std::uint64_t seq_ = 0;
  double last_beats_ = 0.0;
  std::uint64_t dropped_ = 0;
  SceneState scene_;
  std::vector<std::shared_ptr<Subscription>> subs_;
  std::vector<Sink> sinks_;
};

std::string to_ndjson(const std::vector<DrawMessage>& batch);

}  // namespace fuguescope::service
