#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <variant>

namespace fuguescope::audio {

struct LiveDevice {
  std::string id;
};

struct FourMonoFiles {
  std::array<std::filesystem::path, 4> paths;
};

struct MultiChannelFile {
  std::filesystem::path path;
};

using AudioSourceSpec = std::variant<LiveDevice, FourMonoFiles, MultiChannelFile>;

struct AudioConfig {
  double sample_rate = 44100.0;
  int channels = 4;
  double frame_length = 0.050;  // seconds
  double hop = 0.025;           // seconds
  AudioSourceSpec source = LiveDevice{};
  bool paced = false;  // file mode only: real-time pacing

  // Throws ConfigError when an invariant is violated.
  void validate() const;

  std::size_t frame_samples() const;

  // First sample of frame `index`; computed from the index so hop rounding
  // never accumulates.
  std::size_t frame_start_sample(std::size_t index) const;

  double frame_start_time(std::size_t index) const {
    return static_cast<double>(index) * hop;
  }

  // Number of complete frames in a stream of `total_samples` samples.
  std::size_t frame_count(std::size_t total_samples) const;
};

}  // namespace fuguescope::audio
