#include "fuguescope/service/command.hpp"

#include <cmath>
#include <sstream>

#include "fuguescope/error.hpp"
#include "fuguescope/service/message.hpp"

namespace fuguescope::service {
namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

double number_field(const nlohmann::json& j, const char* key, const std::string& id) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw CommandError(id, std::string("field '") + key + "' must be a number");
  }
  const double v = j[key].get<double>();
  if (!std::isfinite(v)) throw CommandError(id, std::string("field '") + key + "' must be finite");
  return v;
}

std::string string_field(const nlohmann::json& j, const char* key, const std::string& id) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw CommandError(id, std::string("field '") + key + "' must be a string");
  }
  return j[key].get<std::string>();
}

}  // namespace

std::string_view command_name(const CommandBody& body) {
  struct Visitor {
    std::string_view operator()(const SetGain&) const { return "set_gain"; }
    std::string_view operator()(const SetPosition&) const { return "set_position"; }
    std::string_view operator()(const SetTuning&) const { return "set_tuning"; }
    std::string_view operator()(const Pause&) const { return "pause"; }
    std::string_view operator()(const Resume&) const { return "resume"; }
    std::string_view operator()(const SetParam&) const { return "set_param"; }
  };
  return std::visit(Visitor{}, body);
}

ControlCommand parse_command(std::string_view text, const CommandBounds& bounds) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception&) {
    throw CommandError("", "malformed command: invalid JSON");
  }
  if (!j.is_object()) throw CommandError("", "malformed command: expected a JSON object");

  std::string id;
  if (j.contains("request_id")) {
    if (!j["request_id"].is_string()) throw CommandError("", "field 'request_id' must be a string");
    id = j["request_id"].get<std::string>();
  }
  if (id.empty()) throw CommandError("", "missing field 'request_id'");
  if (j.contains("v") && (!j["v"].is_number_integer() || j["v"].get<int>() != kSchemaVersion)) {
    throw CommandError(id, "schema version mismatch");
  }
  const std::string kind = string_field(j, "kind", id);

  ControlCommand cmd;
  cmd.request_id = id;
  if (kind == "set_gain") {
    SetGain g;
    try {
      g.voice = parse_voice(string_field(j, "voice", id));
    } catch (const ConfigError& e) {
      throw CommandError(id, e.what());
    }
    g.value = number_field(j, "value", id);
    if (g.value < 0.0 || g.value > bounds.gain_max) {
      throw CommandError(id, "gain " + fmt(g.value) + " outside [0, " + fmt(bounds.gain_max) + "]");
    }
    cmd.body = g;
  } else if (kind == "set_position") {
    cmd.body = SetPosition{number_field(j, "beats", id)};
  } else if (kind == "set_tuning") {
    const double a4 = number_field(j, "a4_hz", id);
    if (a4 < bounds.tuning_min || a4 > bounds.tuning_max) {
      throw CommandError(id, "tuning " + fmt(a4) + " Hz outside [" + fmt(bounds.tuning_min) + ", " +
                                 fmt(bounds.tuning_max) + "]");
    }
    cmd.body = SetTuning{a4};
  } else if (kind == "pause") {
    cmd.body = Pause{};
  } else if (kind == "resume") {
    cmd.body = Resume{};
  } else if (kind == "set_param") {
    cmd.body = SetParam{string_field(j, "path", id), number_field(j, "value", id)};
  } else {
    throw CommandError(id, "unknown command kind '" + kind + "'");
  }
  return cmd;
}

nlohmann::json to_json(const ControlCommand& cmd) {
  nlohmann::json j{{"v", kSchemaVersion}, {"request_id", cmd.request_id}, {"kind", command_name(cmd.body)}};
  if (auto* g = std::get_if<SetGain>(&cmd.body)) {
    j["voice"] = to_string(g->voice);
    j["value"] = g->value;
  } else if (auto* p = std::get_if<SetPosition>(&cmd.body)) {
    j["beats"] = p->beats;
  } else if (auto* t = std::get_if<SetTuning>(&cmd.body)) {
    j["a4_hz"] = t->a4_hz;
  } else if (auto* s = std::get_if<SetParam>(&cmd.body)) {
    j["path"] = s->path;
    j["value"] = s->value;
  }
  return j;
}

nlohmann::json make_ack(const std::string& request_id, std::string_view command) {
  return {{"v", kSchemaVersion}, {"kind", "ack"}, {"request_id", request_id}, {"command", command}};
}

nlohmann::json make_nack(const std::string& request_id, const std::string& reason) {
  return {{"v", kSchemaVersion}, {"kind", "nack"}, {"request_id", request_id}, {"reason", reason}};
}

nlohmann::json make_error(const std::string& reason) {
  return {{"v", kSchemaVersion}, {"kind", "error"}, {"reason", reason}};
}

void CommandQueue::push(ControlCommand command, Reply reply) {
  std::lock_guard lock(mu_);
  entries_.push_back({std::move(command), std::move(reply)});
}

std::vector<CommandQueue::Entry> CommandQueue::drain() {
  std::lock_guard lock(mu_);
  std::vector<Entry> out(std::make_move_iterator(entries_.begin()), std::make_move_iterator(entries_.end()));
  entries_.clear();
  return out;
}

std::size_t CommandQueue::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

}  // namespace fuguescope::service
