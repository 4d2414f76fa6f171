#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fuguescope/pitch/autocorrelation.hpp"
#include "fuguescope/voice.hpp"

namespace fuguescope::pitch {

struct TrackerConfig {
  double f_min = 55.0;
  double f_max = 1760.0;
  double voicing_threshold = 0.3;  // peak / acf[0]
  double amplitude_floor = 1e-4;   // RMS

  void validate(double sample_rate) const;
};

struct PitchFrame {
  Voice voice = Voice::kCello;
  std::size_t index = 0;
  std::optional<double> f0;  // Hz; present iff voiced
  double amplitude = 0.0;    // RMS relative to full scale

  bool voiced() const { return f0.has_value(); }
};

// Picks the strongest interior peak of `acf` within the lag range of
// [f_min, f_max], refines it by parabolic interpolation and returns
// sample_rate / lag. nullopt means unvoiced.
std::optional<double> estimate_f0(std::span<const double> acf, const TrackerConfig& config,
                                  double sample_rate);

// Root mean square, full scale = 1.
double amplitude(std::span<const float> frame);

class PitchTracker {
 public:
  PitchTracker(TrackerConfig config, double sample_rate, std::size_t frame_length);

  PitchFrame track(Voice voice, std::size_t index, std::span<const float> frame);

  const TrackerConfig& config() const { return config_; }
  void set_config(const TrackerConfig& config);

 private:
  TrackerConfig config_;
  double sample_rate_;
  Autocorrelator acf_;
};

}  // namespace fuguescope::pitch
