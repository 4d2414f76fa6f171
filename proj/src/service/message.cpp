#include "fuguescope/service/message.hpp"

#include <array>
#include <stdexcept>
#include <utility>

namespace fuguescope::service {
namespace {

constexpr std::array<std::pair<MessageKind, std::string_view>, 12> kKinds = {{
    {MessageKind::kCurvePoint, "curve_point"},
    {MessageKind::kSegmentState, "segment_state"},
    {MessageKind::kGridLine, "grid_line"},
    {MessageKind::kCircleState, "circle_state"},
    {MessageKind::kTriad, "triad"},
    {MessageKind::kRotation, "rotation"},
    {MessageKind::kCue, "cue"},
    {MessageKind::kLetters, "letters"},
    {MessageKind::kClock, "clock"},
    {MessageKind::kOverrideMarker, "override_marker"},
    {MessageKind::kFollowerHealth, "follower_health"},
    {MessageKind::kSnapshot, "snapshot"},
}};

}  // namespace

std::string_view to_string(MessageKind kind) {
  for (const auto& [k, name] : kKinds) {
    if (k == kind) return name;
  }
  return "unknown";
}

MessageKind parse_message_kind(std::string_view name) {
  for (const auto& [k, n] : kKinds) {
    if (n == name) return k;
  }
  throw std::invalid_argument("unknown message kind '" + std::string(name) + "'");
}

nlohmann::json to_json(const DrawMessage& msg) {
  return nlohmann::json{{"v", kSchemaVersion},        {"seq", msg.seq},
                        {"kind", to_string(msg.kind)}, {"beats", msg.beats},
                        {"wall_time", msg.wall_time},  {"data", msg.data}};
}

std::string encode(const DrawMessage& msg) { return to_json(msg).dump(); }

DrawMessage decode(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed message: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("malformed message: not an object");
  if (!j.contains("v") || !j["v"].is_number_integer()) {
    throw std::invalid_argument("malformed message: missing schema version");
  }
  if (j["v"].get<int>() != kSchemaVersion) {
    throw std::invalid_argument("schema version mismatch: got " + std::to_string(j["v"].get<int>()) +
                                ", expected " + std::to_string(kSchemaVersion));
  }
  try {
    DrawMessage msg;
    msg.seq = j.at("seq").get<std::uint64_t>();
    msg.kind = parse_message_kind(j.at("kind").get<std::string>());
    msg.beats = j.at("beats").get<double>();
    msg.wall_time = j.at("wall_time").get<double>();
    msg.data = j.at("data");
    return msg;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed message: ") + e.what());
  }
}

bool same_content(const DrawMessage& a, const DrawMessage& b) {
  return a.seq == b.seq && a.kind == b.kind && a.beats == b.beats && a.data == b.data;
}

}  // namespace fuguescope::service
