#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

namespace fuguescope {

// Channel order on the interface and in multi-track files is fixed.
enum class Voice { kCello = 0, kViola = 1, kViolin2 = 2, kViolin1 = 3 };

inline constexpr std::size_t kVoiceCount = 4;
inline constexpr std::array<Voice, kVoiceCount> kAllVoices = {
    Voice::kCello, Voice::kViola, Voice::kViolin2, Voice::kViolin1};

constexpr std::size_t index_of(Voice v) { return static_cast<std::size_t>(v); }

std::string_view to_string(Voice v);

// Throws ConfigError for names outside the closed set.
Voice parse_voice(std::string_view name);

}  // namespace fuguescope
