#pragma once

#include <optional>

namespace fuguescope::timeline {

// One note on the quantised axis. Times are performance seconds, abscissae
// normalized screen units.
struct NoteWindow {
  double t_start = 0.0;               // t_i
  std::optional<double> t_end;        // t_{i+1}, once the note has ended
  double t_expected = 0.0;            // t'_{i+1}
  double x_start = 0.0;               // x_i
  double x_end = 0.0;                 // x_{i+1}

  // Throws std::invalid_argument when t_expected <= t_start, x_end <= x_start
  // or t_end <= t_start.
  void validate() const;
};

struct TempoModel {
  double seconds_per_beat = 0.5;

  // Adopts the tempo of a finished note, clamped to [0.25x, 4x] of the
  // current value.
  void observe(double note_seconds, double note_beats);
};

struct MappingPhase {
  enum class Kind { kExpected, kCompressing, kCorrecting, kFinalized };
  Kind kind = Kind::kExpected;
  double progress = 0.0;  // Correcting only, in [0, 1]

  static MappingPhase expected() { return {Kind::kExpected, 0.0}; }
  static MappingPhase compressing() { return {Kind::kCompressing, 0.0}; }
  static MappingPhase correcting(double p) { return {Kind::kCorrecting, p}; }
  static MappingPhase finalized() { return {Kind::kFinalized, 1.0}; }
};

inline constexpr double kDefaultAnimSeconds = 0.25;

// Expected end under a constant-tempo assumption (previous note's tempo).
// Throws std::invalid_argument for non-positive durations.
double expected_end(double t_start, double duration_beats, const TempoModel& tempo);

// Abscissa of the curve point played at time theta, as displayed at time t.
//   Expected:    x_i + (theta - t_i) / (t'_{i+1} - t_i) * dx
//   Compressing: x_i + (theta - t_i) / (t - t_i) * dx
//   Finalized:   x_i + (theta - t_i) / (t_{i+1} - t_i) * dx
//   Correcting:  (1 - u) * Expected + u * Finalized, u = smoothstep(progress)
// Throws std::invalid_argument when theta lies outside [t_i, min(t, t_{i+1})].
double map_time(const NoteWindow& note, double theta, double t, const MappingPhase& phase);

// The mapping at any phase is affine in theta: x = x_i + (theta - t_i) * slope.
double mapping_slope(const NoteWindow& note, double t, const MappingPhase& phase);

// Phase entered when the note ends at t_end: Finalized when the note ran
// at least as long as expected, otherwise Correcting from progress 0.
MappingPhase on_note_end(const NoteWindow& note, double t_end);

// Phase of `note` at display time t, with corrections lasting anim_seconds.
MappingPhase phase_at(const NoteWindow& note, double t, double anim_seconds = kDefaultAnimSeconds);

double smoothstep(double p);

}  // namespace fuguescope::timeline
