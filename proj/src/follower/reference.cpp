#include "fuguescope/follower/reference.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "fuguescope/audio/mixdown.hpp"
#include "fuguescope/audio/wav.hpp"
#include "fuguescope/error.hpp"

namespace fuguescope::follower {
namespace {

constexpr char kMagic[4] = {'F', 'S', 'R', 'I'};

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

  std::vector<char> bytes;
};

class Reader {
 public:
  Reader(std::vector<char> bytes, std::filesystem::path path)
      : bytes_(std::move(bytes)), path_(std::move(path)) {}

  std::uint64_t uint(int width) {
    if (pos_ + static_cast<std::size_t>(width) > bytes_.size()) {
      throw ConfigError(path_.string() + ": truncated reference cache");
    }
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_++])) << (8 * i);
    }
    return v;
  }
  std::uint32_t u32() { return static_cast<std::uint32_t>(uint(4)); }
  float f32() { return std::bit_cast<float>(u32()); }
  double f64() { return std::bit_cast<double>(uint(8)); }
  const char* raw(std::size_t n) {
    if (pos_ + n > bytes_.size()) throw ConfigError(path_.string() + ": truncated reference cache");
    const char* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }

 private:
  std::vector<char> bytes_;
  std::filesystem::path path_;
  std::size_t pos_ = 0;
};

}  // namespace

void ReferenceIndex::push_back(std::span<const float> f) {
  data.insert(data.end(), f.begin(), f.end());
}

ReferenceIndex build_reference(std::span<const float> mono, const audio::AudioConfig& framing,
                               BeatTable beats, const FeatureConfig& features) {
  const double duration = static_cast<double>(mono.size()) / framing.sample_rate;
  for (std::size_t i = 0; i < beats.size(); ++i) {
    const double t = beats.times()[i];
    if (t < 0.0 || t > duration) {
      throw ConfigError("beat annotation out of range: beat " + std::to_string(beats.beats()[i]) +
                        " at " + std::to_string(t) + " s, audio lasts " + std::to_string(duration) +
                        " s");
    }
  }

  const std::size_t n = framing.frame_samples();
  FeatureExtractor extract(framing.sample_rate, n, features);
  ReferenceIndex index;
  index.dims = extract.dims();
  index.hop = framing.hop;
  index.beats = std::move(beats);
  const std::size_t count = framing.frame_count(mono.size());
  index.data.reserve(count * index.dims);
  for (std::size_t k = 0; k < count; ++k) {
    index.push_back(extract(mono.subspan(framing.frame_start_sample(k), n)));
  }
  if (index.size() == 0) throw ConfigError("reference audio shorter than one frame");
  return index;
}

ReferenceIndex build_reference(const std::filesystem::path& audio_path,
                               const std::filesystem::path& beats_path,
                               const audio::AudioConfig& framing, const FeatureConfig& features) {
  audio::WavData wav = audio::read_wav(audio_path);
  if (wav.sample_rate != framing.sample_rate) {
    throw ConfigError(audio_path.string() + ": sample-rate mismatch with run configuration");
  }
  std::vector<float> mono;
  if (wav.channels.size() == 1) {
    mono = std::move(wav.channels[0]);
  } else if (wav.channels.size() == kVoiceCount) {
    audio::MultiChannelFrame all;
    for (std::size_t c = 0; c < kVoiceCount; ++c) all.samples[c] = std::move(wav.channels[c]);
    mono = audio::mixdown(all).samples;
  } else {
    throw ConfigError(audio_path.string() + ": reference must be mono or 4-channel");
  }
  BeatTable beats = read_beat_annotations(beats_path);
  return build_reference(mono, framing, std::move(beats), features);
}

void save_reference(const std::filesystem::path& path, const ReferenceIndex& index) {
  Writer w;
  w.bytes.insert(w.bytes.end(), std::begin(kMagic), std::end(kMagic));
  w.u32(kReferenceCacheVersion);
  w.u32(static_cast<std::uint32_t>(index.dims));
  w.f64(index.hop);
  w.u32(static_cast<std::uint32_t>(index.size()));
  for (float v : index.data) w.f32(v);
  w.u32(static_cast<std::uint32_t>(index.beats.size()));
  for (std::size_t i = 0; i < index.beats.size(); ++i) {
    w.f64(index.beats.times()[i]);
    w.f64(index.beats.beats()[i]);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(path.string() + ": cannot write reference cache");
  out.write(w.bytes.data(), static_cast<std::streamsize>(w.bytes.size()));
}

ReferenceIndex load_reference(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open reference cache");
  Reader r(std::vector<char>((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>()),
           path);
  if (std::memcmp(r.raw(4), kMagic, 4) != 0) {
    throw ConfigError(path.string() + ": not a reference cache (bad magic)");
  }
  const std::uint32_t version = r.u32();
  if (version != kReferenceCacheVersion) {
    throw ConfigError(path.string() + ": unsupported reference cache version " +
                      std::to_string(version));
  }
  ReferenceIndex index;
  index.dims = r.u32();
  index.hop = r.f64();
  const std::uint32_t count = r.u32();
  if (index.dims == 0 || !(index.hop > 0.0)) throw ConfigError(path.string() + ": corrupt header");
  index.data.resize(static_cast<std::size_t>(count) * index.dims);
  for (auto& v : index.data) v = r.f32();
  const std::uint32_t beats = r.u32();
  std::vector<double> times(beats);
  std::vector<double> numbers(beats);
  for (std::uint32_t i = 0; i < beats; ++i) {
    times[i] = r.f64();
    numbers[i] = r.f64();
  }
  index.beats = BeatTable(std::move(times), std::move(numbers));
  return index;
}

}  // namespace fuguescope::follower
