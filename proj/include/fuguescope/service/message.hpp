#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

namespace fuguescope::service {

inline constexpr int kSchemaVersion = 1;

enum class MessageKind {
  kCurvePoint,
  kSegmentState,
  kGridLine,
  kCircleState,
  kTriad,
  kRotation,
  kCue,
  kLetters,
  kClock,
  kOverrideMarker,
  kFollowerHealth,
  kSnapshot,
};

std::string_view to_string(MessageKind kind);
// Throws std::invalid_argument for unknown names.
MessageKind parse_message_kind(std::string_view name);

struct DrawMessage {
  std::uint64_t seq = 0;
  MessageKind kind = MessageKind::kClock;
  double beats = 0.0;
  double wall_time = 0.0;
  nlohmann::json data = nlohmann::json::object();

  bool operator==(const DrawMessage&) const = default;
};

// {"v":1,"seq":..,"kind":..,"beats":..,"wall_time":..,"data":{..}} on one line.
nlohmann::json to_json(const DrawMessage& msg);
std::string encode(const DrawMessage& msg);

// Throws std::invalid_argument on malformed lines or a schema version other
// than kSchemaVersion.
DrawMessage decode(std::string_view line);

// Equality ignoring wall_time.
bool same_content(const DrawMessage& a, const DrawMessage& b);

}  // namespace fuguescope::service
