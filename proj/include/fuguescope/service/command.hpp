#pragma once

#include <deque>
#include <functional>
#include <mutex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fuguescope/voice.hpp"

namespace fuguescope::service {

struct SetGain {
  Voice voice = Voice::kCello;
  double value = 1.0;
};
struct SetPosition {
  double beats = 0.0;
};
struct SetTuning {
  double a4_hz = 440.0;
};
struct Pause {};
struct Resume {};
// Engine parameter by dotted path, e.g. "stroke.tau".
struct SetParam {
  std::string path;
  double value = 0.0;
};

using CommandBody = std::variant<SetGain, SetPosition, SetTuning, Pause, Resume, SetParam>;

struct ControlCommand {
  std::string request_id;
  CommandBody body;
};

std::string_view command_name(const CommandBody& body);

struct CommandBounds {
  double gain_max = 4.0;
  double tuning_min = 400.0;
  double tuning_max = 480.0;
};

// Rejection carrying the request id when one could be read.
class CommandError : public std::runtime_error {
 public:
  CommandError(std::string request_id, const std::string& reason)
      : std::runtime_error(reason), request_id_(std::move(request_id)) {}
  const std::string& request_id() const { return request_id_; }

 private:
  std::string request_id_;
};

// {"v":1,"kind":"set_gain","request_id":"r1","voice":"viola","value":0.8}
// Throws CommandError for malformed JSON, unknown kinds, missing fields and
// values outside bounds. Score-range checks happen when applied.
ControlCommand parse_command(std::string_view text, const CommandBounds& bounds = {});
nlohmann::json to_json(const ControlCommand& cmd);

nlohmann::json make_ack(const std::string& request_id, std::string_view command);
nlohmann::json make_nack(const std::string& request_id, const std::string& reason);
nlohmann::json make_error(const std::string& reason);

using Reply = std::function<void(const nlohmann::json&)>;

// Serialized queue drained by the pipeline between frames.
class CommandQueue {
 public:
  struct Entry {
    ControlCommand command;
    Reply reply;
  };

  void push(ControlCommand command, Reply reply);
  std::vector<Entry> drain();
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::deque<Entry> entries_;
};

}  // namespace fuguescope::service
