#include "fuguescope/voice.hpp"

#include <string>

#include "fuguescope/error.hpp"

namespace fuguescope {

std::string_view to_string(Voice v) {
  switch (v) {
    case Voice::kCello:
      return "cello";
    case Voice::kViola:
      return "viola";
    case Voice::kViolin2:
      return "violin2";
    case Voice::kViolin1:
      return "violin1";
  }
  return "unknown";
}

Voice parse_voice(std::string_view name) {
  for (Voice v : kAllVoices) {
    if (to_string(v) == name) return v;
  }
  throw ConfigError("unknown voice '" + std::string(name) +
                    "' (expected cello, viola, violin2 or violin1)");
}

}  // namespace fuguescope
