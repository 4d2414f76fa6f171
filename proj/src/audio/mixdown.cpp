#include "fuguescope/audio/mixdown.hpp"

namespace fuguescope::audio {

MonoFrame mixdown(const MultiChannelFrame& frame, const Gains& gains) {
  MonoFrame mono;
  mono.index = frame.index;
  mono.start_time = frame.start_time;
  const std::size_t n = frame.samples[0].size();
  mono.samples.assign(n, 0.0f);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < kVoiceCount; ++c) acc += gains[c] * frame.samples[c][i];
    mono.samples[i] = static_cast<float>(acc / static_cast<double>(kVoiceCount));
  }
  return mono;
}

}  // namespace fuguescope::audio
