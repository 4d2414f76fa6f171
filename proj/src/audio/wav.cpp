#include "fuguescope/audio/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "fuguescope/error.hpp"

namespace fuguescope::audio {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& why) {
  throw ConfigError(path.string() + ": " + why);
}

}  // namespace

WavData read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open audio file");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    fail(path, "not a RIFF/WAVE file");
  }

  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t bits = 0;
  bool have_fmt = false;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = std::min<std::size_t>(size, bytes.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (available < 16) fail(path, "truncated fmt chunk");
      format = read_u16(chunk + 8);
      channels = read_u16(chunk + 10);
      rate = read_u32(chunk + 12);
      bits = read_u16(chunk + 22);
      if (format == kFormatExtensible) {
        if (available < 26) fail(path, "truncated extensible fmt chunk");
        format = read_u16(chunk + 8 + 24);  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = available;  // tolerate truncated recordings
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt) fail(path, "missing fmt chunk");
  if (data == nullptr) fail(path, "missing data chunk");
  if (channels == 0) fail(path, "zero channels");

  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool pcm24 = format == kFormatPcm && bits == 24;
  const bool f32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !pcm24 && !f32) {
    fail(path, "unsupported sample format (need PCM 16/24-bit or float 32-bit)");
  }

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t frames = data_size / (bytes_per_sample * channels);
  WavData out;
  out.sample_rate = rate;
  out.channels.assign(channels, std::vector<float>(frames));
  const unsigned char* p = data;
  for (std::size_t i = 0; i < frames; ++i) {
    for (std::size_t c = 0; c < channels; ++c) {
      float v = 0.0f;
      if (pcm16) {
        v = static_cast<float>(static_cast<std::int16_t>(read_u16(p))) / 32768.0f;
      } else if (pcm24) {
        std::int32_t s = p[0] | (p[1] << 8) | (p[2] << 16);
        if (s & 0x800000) s -= 0x1000000;
        v = static_cast<float>(s) / 8388608.0f;
      } else {
        v = std::bit_cast<float>(read_u32(p));
      }
      out.channels[c][i] = v;
      p += bytes_per_sample;
    }
  }
  return out;
}

void write_wav(const std::filesystem::path& path, const WavData& data,
               WavEncoding encoding) {
  const auto channels = static_cast<std::uint16_t>(data.channels.size());
  const std::size_t frames = data.length();
  for (const auto& ch : data.channels) {
    if (ch.size() != frames) throw ConfigError("write_wav: ragged channels");
  }
  const std::uint16_t bits = encoding == WavEncoding::kPcm16   ? 16
                             : encoding == WavEncoding::kPcm24 ? 24
                                                               : 32;
  const std::uint16_t format = encoding == WavEncoding::kFloat32 ? kFormatFloat : kFormatPcm;
  const std::uint32_t block = channels * (bits / 8u);
  const auto data_size = static_cast<std::uint32_t>(frames * block);

  std::vector<unsigned char> out;
  out.reserve(44 + data_size);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put_u32(out, 36 + data_size);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  put_u32(out, 16);
  put_u16(out, format);
  put_u16(out, channels);
  const auto rate = static_cast<std::uint32_t>(std::lround(data.sample_rate));
  put_u32(out, rate);
  put_u32(out, rate * block);
  put_u16(out, static_cast<std::uint16_t>(block));
  put_u16(out, bits);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put_u32(out, data_size);

  for (std::size_t i = 0; i < frames; ++i) {
    for (const auto& ch : data.channels) {
      const float v = ch[i];
      if (encoding == WavEncoding::kFloat32) {
        put_u32(out, std::bit_cast<std::uint32_t>(v));
      } else {
        const double clamped = std::clamp(static_cast<double>(v), -1.0, 1.0);
        if (encoding == WavEncoding::kPcm16) {
          const auto s = static_cast<std::int16_t>(
              std::clamp<long>(std::lround(clamped * 32768.0), -32768, 32767));
          put_u16(out, static_cast<std::uint16_t>(s));
        } else {
          const auto s = static_cast<std::int32_t>(
              std::clamp<long>(std::lround(clamped * 8388608.0), -8388608, 8388607));
          out.push_back(static_cast<unsigned char>(s & 0xFF));
          out.push_back(static_cast<unsigned char>((s >> 8) & 0xFF));
          out.push_back(static_cast<unsigned char>((s >> 16) & 0xFF));
        }
      }
    }
  }

  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError(path.string() + ": cannot write audio file");
  file.write(reinterpret_cast<const char*>(out.data()),
             static_cast<std::streamsize>(out.size()));
}

}  // namespace fuguescope::audio
