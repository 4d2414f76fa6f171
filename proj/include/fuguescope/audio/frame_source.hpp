#pragma once

#include <array>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <memory>
#include <optional>
#include <thread>
#include <vector>

#include "fuguescope/audio/audio_config.hpp"
#include "fuguescope/audio/bounded_queue.hpp"
#include "fuguescope/audio/frames.hpp"

namespace fuguescope::audio {

class FrameSource {
 public:
  virtual ~FrameSource() = default;
  // Next frame in index order, nullopt at end of stream.
  virtual std::optional<MultiChannelFrame> next() = 0;
  virtual bool is_live() const = 0;
};

// Multi-track audio held in memory and cut into overlapping frames.
class FileSource final : public FrameSource {
 public:
  FileSource(AudioConfig config, std::array<std::vector<float>, kVoiceCount> channels);

  // Loads the files named by config.source (four mono files or one
  // 4-channel file). Throws ConfigError on unreadable files or channel
  // count, sample rate or length mismatches.
  static FileSource open(const AudioConfig& config);

  std::size_t frame_count() const { return frame_count_; }
  MultiChannelFrame frame(std::size_t index) const;
  const AudioConfig& config() const { return config_; }
  const std::array<std::vector<float>, kVoiceCount>& channels() const { return channels_; }

  std::optional<MultiChannelFrame> next() override;
  bool is_live() const override { return false; }

  // Real-time pacing multiplier used when config.paced is set.
  void set_speed(double speed) { speed_ = speed; }

 private:
  AudioConfig config_;
  std::array<std::vector<float>, kVoiceCount> channels_;
  std::size_t frame_count_ = 0;
  std::size_t cursor_ = 0;
  double speed_ = 1.0;
  std::optional<std::chrono::steady_clock::time_point> started_;
};

// Port for full-duplex device capture. This build carries no device
// backend, so construction reports the device as unavailable.
class LiveCapture final : public FrameSource {
 public:
  explicit LiveCapture(const AudioConfig& config);
  std::optional<MultiChannelFrame> next() override;
  bool is_live() const override { return true; }
};

std::unique_ptr<FrameSource> open_source(const AudioConfig& config);

// Runs a FrameSource on its own producer thread behind a bounded FIFO.
// Live sources drop the oldest frame on overflow; file sources block.
class FrameStream {
 public:
  static constexpr std::size_t kDefaultCapacity = 64;

  explicit FrameStream(std::unique_ptr<FrameSource> source,
                       std::size_t capacity = kDefaultCapacity);
  ~FrameStream();
  FrameStream(const FrameStream&) = delete;
  FrameStream& operator=(const FrameStream&) = delete;

  std::optional<MultiChannelFrame> next() { return queue_.pop(); }
  std::size_t dropped() const { return dropped_.load(); }
  void stop();

 private:
  std::unique_ptr<FrameSource> source_;
  BoundedQueue<MultiChannelFrame> queue_;
  std::atomic<std::size_t> dropped_{0};
  std::atomic<bool> stopping_{false};
  std::thread producer_;
};

}  // namespace fuguescope::audio
