#pragma once

#include <array>

#include "fuguescope/audio/frames.hpp"

namespace fuguescope::audio {

using Gains = std::array<double, kVoiceCount>;

inline constexpr Gains kUnitGains = {1.0, 1.0, 1.0, 1.0};

// Sample-wise sum of gain-scaled channels divided by 4.
MonoFrame mixdown(const MultiChannelFrame& frame, const Gains& gains = kUnitGains);

}  // namespace fuguescope::audio
