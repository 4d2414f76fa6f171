#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "fuguescope/audio/audio_config.hpp"
#include "fuguescope/follower/beat_map.hpp"
#include "fuguescope/follower/features.hpp"

namespace fuguescope::follower {

struct ReferenceIndex {
  std::size_t dims = 0;
  double hop = 0.0;  // seconds per feature frame
  std::vector<float> data;  // size() * dims, frame-major
  BeatTable beats;

  std::size_t size() const { return dims == 0 ? 0 : data.size() / dims; }
  std::span<const float> feature(std::size_t i) const {
    return {data.data() + i * dims, dims};
  }
  void push_back(std::span<const float> f);
};

// Frames `mono` exactly like the live path and extracts one feature vector
// per hop. Throws ConfigError if an annotated beat lies outside the audio.
ReferenceIndex build_reference(std::span<const float> mono, const audio::AudioConfig& framing,
                               BeatTable beats, const FeatureConfig& features = {});

// Reads a mono or 4-channel reference recording (4 channels are mixed down
// with unit gains) plus its beat annotation file.
ReferenceIndex build_reference(const std::filesystem::path& audio_path,
                               const std::filesystem::path& beats_path,
                               const audio::AudioConfig& framing,
                               const FeatureConfig& features = {});

// Binary cache: "FSRI", u32 version, u32 D, f64 hop, u32 count, count*D f32,
// u32 beat count, (f64 time, f64 beat) pairs. Little-endian.
inline constexpr std::uint32_t kReferenceCacheVersion = 1;

void save_reference(const std::filesystem::path& path, const ReferenceIndex& index);
ReferenceIndex load_reference(const std::filesystem::path& path);

}  // namespace fuguescope::follower
