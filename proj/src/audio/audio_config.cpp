#include "fuguescope/audio/audio_config.hpp"

#include <cmath>

#include "fuguescope/error.hpp"

namespace fuguescope {
namespace audio {

void AudioConfig::validate() const {
  if (channels != 4) {
    throw ConfigError("audio config: channels must be 4, got " +
                      std::to_string(channels));
  }
  if (sample_rate != 44100.0 && sample_rate != 48000.0) {
    throw ConfigError("audio config: sample rate must be 44100 or 48000");
  }
  if (!(hop > 0.0) || !(frame_length > hop)) {
    throw ConfigError("audio config: need frame_length > hop > 0");
  }
}

std::size_t AudioConfig::frame_samples() const {
  return static_cast<std::size_t>(std::llround(frame_length * sample_rate));
}

std::size_t AudioConfig::frame_start_sample(std::size_t index) const {
  return static_cast<std::size_t>(
      std::llround(static_cast<double>(index) * hop * sample_rate));
}

std::size_t AudioConfig::frame_count(std::size_t total_samples) const {
  const std::size_t n = frame_samples();
  if (total_samples < n) return 0;
  // Estimate, then settle on the exact boundary using the same rounding as
  // frame_start_sample.
  auto count = static_cast<std::size_t>(
      static_cast<double>(total_samples - n) / (hop * sample_rate)) + 1;
  while (count > 0 && frame_start_sample(count - 1) + n > total_samples) --count;
  while (frame_start_sample(count) + n <= total_samples) ++count;
  return count;
}

}  // namespace audio
}  // namespace fuguescope
