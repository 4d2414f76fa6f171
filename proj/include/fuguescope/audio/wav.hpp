#pragma once

#include <filesystem>
#include <vector>

namespace fuguescope::audio {

// Deinterleaved audio, samples scaled to [-1, 1].
struct WavData {
  double sample_rate = 0.0;
  std::vector<std::vector<float>> channels;

  std::size_t length() const { return channels.empty() ? 0 : channels[0].size(); }
};

enum class WavEncoding { kPcm16, kPcm24, kFloat32 };

// Reads RIFF WAVE: PCM 16/24-bit, IEEE float 32-bit, plain or extensible
// format tag. Throws ConfigError on unreadable or unsupported files.
WavData read_wav(const std::filesystem::path& path);

void write_wav(const std::filesystem::path& path, const WavData& data,
               WavEncoding encoding = WavEncoding::kFloat32);

}  // namespace fuguescope::audio
