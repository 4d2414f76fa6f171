#include "fuguescope/layout/layout.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fuguescope/error.hpp"

namespace fuguescope::layout {

std::optional<Located> locate(const ParadigmaticScript& script, Voice voice, double beats) {
  const auto& lane = script.segments(voice);
  auto it = std::upper_bound(lane.begin(), lane.end(), beats,
                             [](double b, const Segment& s) { return b < s.t1; });
  if (it == lane.begin()) return std::nullopt;
  const Segment& s = *std::prev(it);
  if (beats >= s.t2) return std::nullopt;
  return Located{&s, s.x1 + (beats - s.t1) * script.pixels_per_beat};
}

double y_of(double f0_hz, const ParadigmaticScript& script, double a4_hz) {
  if (!(f0_hz > 0.0)) throw std::invalid_argument("y_of: frequency must be positive");
  return script.y_reference + std::log2(f0_hz / a4_hz) * script.octave_height;
}

void StrokeParams::validate() const {
  if (!(w_min >= 0.0 && w_max >= w_min)) throw ConfigError("stroke: need 0 <= w_min <= w_max");
  if (!(gamma > 0.0)) throw ConfigError("stroke: gamma must be positive");
  if (!(tau > 0.0)) throw ConfigError("stroke: tau must be positive");
  if (!(r_floor >= 0.0 && r_floor <= 1.0)) throw ConfigError("stroke: r_floor must lie in [0, 1]");
}

double recency_factor(double age_seconds, const StrokeParams& params) {
  return std::max(params.r_floor, std::exp(-std::max(0.0, age_seconds) / params.tau));
}

double stroke_width(double amplitude, double age_seconds, const StrokeParams& params) {
  const double a = std::clamp(amplitude, 0.0, 1.0);
  const double base = params.w_min + (params.w_max - params.w_min) * std::pow(a, params.gamma);
  return base * recency_factor(age_seconds, params);
}

VoiceStyle voice_style(Voice voice) {
  switch (voice) {
    case Voice::kCello:
      return {"red", "#d62728", "filled_circle"};
    case Voice::kViola:
      return {"black", "#000000", "filled_circle"};
    case Voice::kViolin2:
      return {"blue", "#1f4fd6", "filled_circle"};
    case Voice::kViolin1:
      return {"orange", "#ff8c00", "filled_circle"};
  }
  return {"red", "#d62728", "filled_circle"};
}

VoiceStyle voice_style(std::string_view voice_name) { return voice_style(parse_voice(voice_name)); }

}  // namespace fuguescope::layout
