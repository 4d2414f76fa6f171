#include "fuguescope/audio/frame_source.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>

#include "fuguescope/audio/wav.hpp"
#include "fuguescope/error.hpp"

namespace fuguescope::audio {
namespace {

std::array<std::vector<float>, kVoiceCount> load_channels(const AudioConfig& config) {
  std::array<std::vector<float>, kVoiceCount> channels;
  std::vector<std::string> names;

  if (const auto* mono = std::get_if<FourMonoFiles>(&config.source)) {
    for (std::size_t c = 0; c < kVoiceCount; ++c) {
      WavData wav = read_wav(mono->paths[c]);
      if (wav.channels.size() != 1) {
        throw ConfigError(mono->paths[c].string() + ": channel-count mismatch (expected mono, got " +
                          std::to_string(wav.channels.size()) + " channels)");
      }
      if (wav.sample_rate != config.sample_rate) {
        throw ConfigError(mono->paths[c].string() + ": sample-rate mismatch (" +
                          std::to_string(static_cast<long>(wav.sample_rate)) + " Hz, expected " +
                          std::to_string(static_cast<long>(config.sample_rate)) + " Hz)");
      }
      channels[c] = std::move(wav.channels[0]);
      names.push_back(mono->paths[c].string());
    }
  } else if (const auto* multi = std::get_if<MultiChannelFile>(&config.source)) {
    WavData wav = read_wav(multi->path);
    if (wav.channels.size() != kVoiceCount) {
      throw ConfigError(multi->path.string() + ": channel-count mismatch (expected 4, got " +
                        std::to_string(wav.channels.size()) + ")");
    }
    if (wav.sample_rate != config.sample_rate) {
      throw ConfigError(multi->path.string() + ": sample-rate mismatch");
    }
    for (std::size_t c = 0; c < kVoiceCount; ++c) channels[c] = std::move(wav.channels[c]);
  } else {
    throw ConfigError("file source requested for a live device");
  }

  const auto [shortest, longest] = std::minmax_element(
      channels.begin(), channels.end(),
      [](const auto& a, const auto& b) { return a.size() < b.size(); });
  const auto hop_samples = config.hop * config.sample_rate;
  if (static_cast<double>(longest->size() - shortest->size()) > hop_samples) {
    throw ConfigError("channel-length mismatch: tracks differ by " +
                      std::to_string(longest->size() - shortest->size()) +
                      " samples (more than one hop)");
  }
  for (auto& ch : channels) ch.resize(shortest->size());
  return channels;
}

}  // namespace

FileSource::FileSource(AudioConfig config, std::array<std::vector<float>, kVoiceCount> channels)
    : config_(std::move(config)), channels_(std::move(channels)) {
  config_.validate();
  const std::size_t length = channels_[0].size();
  for (const auto& ch : channels_) {
    if (ch.size() != length) throw ConfigError("channel-length mismatch in frame source");
  }
  frame_count_ = config_.frame_count(length);
}

FileSource FileSource::open(const AudioConfig& config) {
  config.validate();
  return FileSource(config, load_channels(config));
}

MultiChannelFrame FileSource::frame(std::size_t index) const {
  const std::size_t n = config_.frame_samples();
  const std::size_t start = config_.frame_start_sample(index);
  MultiChannelFrame f;
  f.index = index;
  f.start_time = config_.frame_start_time(index);
  for (std::size_t c = 0; c < kVoiceCount; ++c) {
    const auto first = channels_[c].begin() + static_cast<std::ptrdiff_t>(start);
    f.samples[c].assign(first, first + static_cast<std::ptrdiff_t>(n));
  }
  return f;
}

std::optional<MultiChannelFrame> FileSource::next() {
  if (cursor_ >= frame_count_) return std::nullopt;
  MultiChannelFrame f = frame(cursor_++);
  if (config_.paced) {
    const auto now = std::chrono::steady_clock::now();
    if (!started_) started_ = now;
    // A frame is available once its last sample would have been captured.
    const double due = (f.start_time + config_.frame_length) / speed_;
    std::this_thread::sleep_until(*started_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                                  std::chrono::duration<double>(due)));
  }
  return f;
}

LiveCapture::LiveCapture(const AudioConfig& config) {
  const auto& device = std::get<LiveDevice>(config.source);
  throw RuntimeError("device unavailable: '" + (device.id.empty() ? std::string("default") : device.id) +
                     "' (this build has no audio capture backend)");
}

std::optional<MultiChannelFrame> LiveCapture::next() { return std::nullopt; }

std::unique_ptr<FrameSource> open_source(const AudioConfig& config) {
  config.validate();
  if (std::holds_alternative<LiveDevice>(config.source)) {
    return std::make_unique<LiveCapture>(config);
  }
  return std::make_unique<FileSource>(FileSource::open(config));
}

FrameStream::FrameStream(std::unique_ptr<FrameSource> source, std::size_t capacity)
    : source_(std::move(source)), queue_(capacity) {
  producer_ = std::thread([this] {
    const bool live = source_->is_live();
    while (!stopping_.load()) {
      auto frame = source_->next();
      if (!frame) break;
      if (live) {
        if (queue_.push_drop_oldest(std::move(*frame))) {
          const auto n = ++dropped_;
          std::cerr << "fuguescope: capture overflow, dropped frame (total " << n << ")\n";
        }
      } else if (!queue_.push_wait(std::move(*frame))) {
        break;
      }
    }
    queue_.close();
  });
}

FrameStream::~FrameStream() { stop(); }

void FrameStream::stop() {
  stopping_.store(true);
  queue_.close();
  if (producer_.joinable()) producer_.join();
}

}  // namespace fuguescope::audio
