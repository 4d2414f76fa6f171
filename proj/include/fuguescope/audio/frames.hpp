#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "fuguescope/voice.hpp"

namespace fuguescope::audio {

struct MultiChannelFrame {
  std::size_t index = 0;
  double start_time = 0.0;  // index * hop
  std::array<std::vector<float>, kVoiceCount> samples;
};

struct MonoFrame {
  std::size_t index = 0;
  double start_time = 0.0;
  std::vector<float> samples;
};

}  // namespace fuguescope::audio
