#include <doctest.h>

#include <cmath>
#include <random>

#include "fuguescope/audio/audio_config.hpp"
#include "fuguescope/audio/bounded_queue.hpp"
#include "fuguescope/audio/frame_source.hpp"
#include "fuguescope/audio/mixdown.hpp"
#include "fuguescope/audio/wav.hpp"
#include "fuguescope/error.hpp"
#include "synth.hpp"

using namespace fuguescope;
using namespace fuguescope::audio;

namespace {

std::array<std::filesystem::path, 4> write_four(const std::filesystem::path& dir, double seconds_each,
                                                double last_seconds) {
  std::array<std::filesystem::path, 4> paths;
  for (int c = 0; c < 4; ++c) {
    WavData w;
    w.sample_rate = 44100;
    w.channels = {testing::sine(220.0 * (c + 1), c == 3 ? last_seconds : seconds_each, 44100)};
    paths[c] = dir / ("ch" + std::to_string(c) + ".wav");
    write_wav(paths[c], w, WavEncoding::kPcm16);
  }
  return paths;
}

}  // namespace

TEST_CASE("frame count counts complete 50 ms frames at a 25 ms hop") {
  AudioConfig cfg;
  // Frame k starts at round(k * 1102.5); the last complete frame of 10 s is k = 398.
  CHECK(cfg.frame_samples() == 2205);
  CHECK(cfg.frame_count(441000) == 399);
  CHECK(cfg.frame_count(2204) == 0);
  CHECK(cfg.frame_count(2205) == 1);
  CHECK(cfg.frame_start_sample(2) == 2205);
  CHECK(cfg.frame_start_sample(1) == 1103);
}

TEST_CASE("start_time is index times hop with no drift") {
  AudioConfig cfg;
  for (std::size_t k : {0u, 1u, 7u, 1000u, 123456u}) {
    CHECK(cfg.frame_start_time(k) == static_cast<double>(k) * 0.025);
  }
}

TEST_CASE("audio config invariants") {
  AudioConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.sample_rate = 22050;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.sample_rate = 48000;
  cfg.hop = 0.06;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.hop = 0.025;
  cfg.channels = 2;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("four mono files and one 4-channel file give identical frames") {
  const auto dir = testing::scratch_dir("audio_layout");
  const auto paths = write_four(dir, 10.0, 10.0);
  WavData quad;
  quad.sample_rate = 44100;
  for (const auto& p : paths) quad.channels.push_back(read_wav(p).channels[0]);
  write_wav(dir / "quad.wav", quad, WavEncoding::kPcm16);

  AudioConfig a;
  a.source = FourMonoFiles{paths};
  AudioConfig b;
  b.source = MultiChannelFile{dir / "quad.wav"};
  auto fa = FileSource::open(a);
  auto fb = FileSource::open(b);
  REQUIRE(fa.frame_count() == 399);
  REQUIRE(fb.frame_count() == 399);
  for (std::size_t k : {0u, 200u, 398u}) {
    const auto x = fa.frame(k);
    const auto y = fb.frame(k);
    CHECK(x.start_time == y.start_time);
    for (int c = 0; c < 4; ++c) CHECK(x.samples[c] == y.samples[c]);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("open_source rejects mismatched inputs") {
  const auto dir = testing::scratch_dir("audio_mismatch");
  SUBCASE("lengths 10 s and 9 s") {
    AudioConfig cfg;
    cfg.source = FourMonoFiles{write_four(dir, 10.0, 9.0)};
    CHECK_THROWS_WITH_AS(FileSource::open(cfg), doctest::Contains("channel-length mismatch"), ConfigError);
  }
  SUBCASE("sample rate") {
    AudioConfig cfg;
    cfg.sample_rate = 48000;
    cfg.source = FourMonoFiles{write_four(dir, 1.0, 1.0)};
    CHECK_THROWS_WITH_AS(FileSource::open(cfg), doctest::Contains("sample-rate mismatch"), ConfigError);
  }
  SUBCASE("channel count") {
    WavData stereo;
    stereo.sample_rate = 44100;
    stereo.channels = {testing::sine(220, 1, 44100), testing::sine(330, 1, 44100)};
    write_wav(dir / "stereo.wav", stereo);
    AudioConfig cfg;
    cfg.source = MultiChannelFile{dir / "stereo.wav"};
    CHECK_THROWS_WITH_AS(FileSource::open(cfg), doctest::Contains("channel-count mismatch"), ConfigError);
  }
  SUBCASE("unreadable file") {
    AudioConfig cfg;
    cfg.source = MultiChannelFile{dir / "missing.wav"};
    CHECK_THROWS(FileSource::open(cfg));
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("live capture reports the device as unavailable") {
  AudioConfig cfg;
  cfg.source = LiveDevice{"hw:7"};
  CHECK_THROWS_WITH_AS(open_source(cfg), doctest::Contains("device unavailable"), RuntimeError);
}

TEST_CASE("wav round trip in every encoding") {
  const auto dir = testing::scratch_dir("wav");
  WavData w;
  w.sample_rate = 48000;
  w.channels = {testing::sine(440, 0.1, 48000, 0.9), testing::sine(660, 0.1, 48000, -0.4)};
  for (auto [enc, tol] : {std::pair{WavEncoding::kPcm16, 1.0 / 32767}, std::pair{WavEncoding::kPcm24, 1.0 / 8388607},
                          std::pair{WavEncoding::kFloat32, 0.0}}) {
    write_wav(dir / "x.wav", w, enc);
    const auto r = read_wav(dir / "x.wav");
    REQUIRE(r.sample_rate == 48000);
    REQUIRE(r.channels.size() == 2);
    REQUIRE(r.length() == w.length());
    double worst = 0.0;
    for (int c = 0; c < 2; ++c) {
      for (std::size_t i = 0; i < r.length(); ++i) {
        worst = std::max(worst, std::abs(double(r.channels[c][i]) - w.channels[c][i]));
      }
    }
    CHECK(worst <= tol * 1.01 + 1e-12);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("mixdown examples") {
  MultiChannelFrame f;
  f.index = 5;
  f.start_time = 0.125;
  const std::vector<float> s = {0.4f, -0.8f, 0.2f, 1.0f};
  for (auto& ch : f.samples) ch.assign(4, 0.0f);

  SUBCASE("all zero") {
    const auto m = mixdown(f);
    CHECK(m.index == 5);
    CHECK(m.start_time == 0.125);
    for (float v : m.samples) CHECK(v == 0.0f);
  }
  SUBCASE("one channel, unit gains") {
    f.samples[2] = s;
    const auto m = mixdown(f);
    for (std::size_t i = 0; i < 4; ++i) CHECK(m.samples[i] == doctest::Approx(s[i] / 4.0));
  }
  SUBCASE("gains (2, 0, 0, 0)") {
    f.samples[0] = s;
    f.samples[1] = s;
    const auto m = mixdown(f, {2.0, 0.0, 0.0, 0.0});
    for (std::size_t i = 0; i < 4; ++i) CHECK(m.samples[i] == doctest::Approx(s[i] / 2.0));
  }
}

TEST_CASE("mixdown is linear") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<float> u(-0.5f, 0.5f);
  MultiChannelFrame a, b, sum;
  for (int c = 0; c < 4; ++c) {
    for (int i = 0; i < 64; ++i) {
      const float x = u(rng), y = u(rng);
      a.samples[c].push_back(x);
      b.samples[c].push_back(y);
      sum.samples[c].push_back(x + y);
    }
  }
  const Gains g = {0.5, 1.5, 2.0, 0.25};
  const auto ma = mixdown(a, g), mb = mixdown(b, g), ms = mixdown(sum, g);
  for (int i = 0; i < 64; ++i) CHECK(ms.samples[i] == doctest::Approx(ma.samples[i] + mb.samples[i]).epsilon(1e-5));
}

TEST_CASE("consecutive frames overlap by frame_length minus hop") {
  AudioConfig cfg;
  std::array<std::vector<float>, 4> ch;
  for (auto& c : ch) {
    c.resize(44100);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = static_cast<float>(i) / 44100.0f;
  }
  FileSource src(cfg, ch);
  const auto f0 = src.frame(2);
  const auto f1 = src.frame(3);
  const std::size_t shift = cfg.frame_start_sample(3) - cfg.frame_start_sample(2);
  for (std::size_t i = 0; i + shift < f0.samples[0].size(); ++i) CHECK(f0.samples[0][i + shift] == f1.samples[0][i]);
}

TEST_CASE("bounded queue drops the oldest item when full") {
  BoundedQueue<int> q(3);
  CHECK_FALSE(q.push_drop_oldest(1));
  CHECK_FALSE(q.push_drop_oldest(2));
  CHECK_FALSE(q.push_drop_oldest(3));
  CHECK(q.push_drop_oldest(4));
  CHECK(q.pop() == 2);
  q.close();
  CHECK(q.pop() == 3);
  CHECK(q.pop() == 4);
  CHECK_FALSE(q.pop().has_value());
}

TEST_CASE("file stream delivers every frame in order") {
  AudioConfig cfg;
  std::array<std::vector<float>, 4> ch;
  for (auto& c : ch) c.assign(44100 * 3, 0.1f);
  auto src = std::make_unique<FileSource>(cfg, ch);
  const std::size_t expected = src->frame_count();
  FrameStream stream(std::move(src), 4);
  std::size_t n = 0;
  while (auto f = stream.next()) {
    CHECK(f->index == n);
    ++n;
  }
  CHECK(n == expected);
  CHECK(stream.dropped() == 0);
}
