#pragma once

#include <optional>
#include <string_view>

#include "fuguescope/layout/script.hpp"

namespace fuguescope::layout {

struct Located {
  const Segment* segment = nullptr;
  double x = 0.0;  // x1 + (beats - t1) * pixels_per_beat
};

// Segment of `voice` whose [t1, t2) contains `beats`; nullopt in rests.
std::optional<Located> locate(const ParadigmaticScript& script, Voice voice, double beats);

// Log-frequency height; a4_hz sits at y_reference, one octave per
// octave_height. Larger y is higher pitch.
double y_of(double f0_hz, const ParadigmaticScript& script, double a4_hz = 440.0);

struct StrokeParams {
  double w_min = 0.5;
  double w_max = 6.0;
  double gamma = 0.5;
  double tau = 20.0;  // seconds
  double r_floor = 0.15;

  void validate() const;
};

// max(r_floor, exp(-age / tau)); 1 at the curve head.
double recency_factor(double age_seconds, const StrokeParams& params = {});

// (w_min + (w_max - w_min) * amplitude^gamma) * recency_factor(age).
double stroke_width(double amplitude, double age_seconds, const StrokeParams& params = {});

struct VoiceStyle {
  std::string_view color;
  std::string_view hex;
  std::string_view marker;
};

VoiceStyle voice_style(Voice voice);
// Throws ConfigError for names outside the four voices.
VoiceStyle voice_style(std::string_view voice_name);

}  // namespace fuguescope::layout
