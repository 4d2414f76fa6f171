#include "fuguescope/pitch/pitch_tracker.hpp"

#include <algorithm>
#include <cmath>

#include "fuguescope/error.hpp"

namespace fuguescope::pitch {

void TrackerConfig::validate(double sample_rate) const {
  if (!(f_min > 0.0 && f_min < f_max && f_max < sample_rate / 2.0)) {
    throw ConfigError("tracker config: need 0 < f_min < f_max < sample_rate/2");
  }
  if (!(voicing_threshold >= 0.0 && voicing_threshold <= 1.0)) {
    throw ConfigError("tracker config: voicing_threshold must lie in [0, 1]");
  }
  if (!(amplitude_floor >= 0.0)) {
    throw ConfigError("tracker config: amplitude_floor must be non-negative");
  }
}

std::optional<double> estimate_f0(std::span<const double> acf, const TrackerConfig& config,
                                  double sample_rate) {
  const std::size_t n = acf.size();
  if (n < 3 || !(acf[0] > 0.0)) return std::nullopt;
  const double rms = std::sqrt(acf[0] / static_cast<double>(n));
  if (rms < config.amplitude_floor) return std::nullopt;

  // A quarter tone of slack on both sides so tones at the range limits,
  // vibrato included, can still be interior peaks; the result is clamped.
  const double slack = std::exp2(1.0 / 24.0);
  const auto lo = static_cast<std::size_t>(
      std::max(1.0, std::floor(sample_rate / (config.f_max * slack)) - 1.0));
  const auto hi = std::min<std::size_t>(
      n - 2, static_cast<std::size_t>(std::ceil(sample_rate * slack / config.f_min)) + 1);

  std::size_t best = 0;
  for (std::size_t k = lo; k <= hi; ++k) {
    const bool peak = acf[k - 1] < acf[k] && acf[k] >= acf[k + 1];
    if (peak && (best == 0 || acf[k] > acf[best])) best = k;
  }
  if (best == 0 || acf[best] < config.voicing_threshold * acf[0]) return std::nullopt;

  const double a = acf[best - 1];
  const double b = acf[best];
  const double c = acf[best + 1];
  const double denom = a - 2.0 * b + c;
  double offset = 0.0;
  if (denom < 0.0) offset = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
  return std::clamp(sample_rate / (static_cast<double>(best) + offset), config.f_min, config.f_max);
}

double amplitude(std::span<const float> frame) {
  if (frame.empty()) return 0.0;
  double sum = 0.0;
  for (float s : frame) sum += static_cast<double>(s) * s;
  return std::sqrt(sum / static_cast<double>(frame.size()));
}

PitchTracker::PitchTracker(TrackerConfig config, double sample_rate, std::size_t frame_length)
    : config_(config), sample_rate_(sample_rate), acf_(frame_length) {
  config_.validate(sample_rate_);
}

void PitchTracker::set_config(const TrackerConfig& config) {
  config.validate(sample_rate_);
  config_ = config;
}

PitchFrame PitchTracker::track(Voice voice, std::size_t index, std::span<const float> frame) {
  PitchFrame out;
  out.voice = voice;
  out.index = index;
  out.amplitude = std::min(1.0, amplitude(frame));
  if (out.amplitude >= config_.amplitude_floor) {
    const auto acf = acf_(frame);
    out.f0 = estimate_f0(acf, config_, sample_rate_);
  }
  return out;
}

}  // namespace fuguescope::pitch
