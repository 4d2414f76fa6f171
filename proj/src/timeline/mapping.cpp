#include "fuguescope/timeline/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fuguescope::timeline {

void NoteWindow::validate() const {
  if (!(t_expected > t_start)) throw std::invalid_argument("note window: need t_expected > t_start");
  if (!(x_end > x_start)) throw std::invalid_argument("note window: need x_next > x_i");
  if (t_end && !(*t_end > t_start)) throw std::invalid_argument("note window: need t_next > t_i");
}

void TempoModel::observe(double note_seconds, double note_beats) {
  if (!(note_seconds > 0.0) || !(note_beats > 0.0)) return;
  const double candidate = note_seconds / note_beats;
  seconds_per_beat = std::clamp(candidate, 0.25 * seconds_per_beat, 4.0 * seconds_per_beat);
}

double expected_end(double t_start, double duration_beats, const TempoModel& tempo) {
  if (!(duration_beats > 0.0)) throw std::invalid_argument("expected_end: duration must be positive");
  if (!(tempo.seconds_per_beat > 0.0)) throw std::invalid_argument("expected_end: tempo must be positive");
  return t_start + duration_beats * tempo.seconds_per_beat;
}

double smoothstep(double p) {
  p = std::clamp(p, 0.0, 1.0);
  return p * p * (3.0 - 2.0 * p);
}

double mapping_slope(const NoteWindow& note, double t, const MappingPhase& phase) {
  const double dx = note.x_end - note.x_start;
  const double expected = dx / (note.t_expected - note.t_start);
  switch (phase.kind) {
    case MappingPhase::Kind::kExpected:
      return expected;
    case MappingPhase::Kind::kCompressing:
      return dx / (t - note.t_start);
    case MappingPhase::Kind::kFinalized:
      if (!note.t_end) throw std::invalid_argument("map_time: finalized note without an end");
      return dx / (*note.t_end - note.t_start);
    case MappingPhase::Kind::kCorrecting: {
      if (!note.t_end) throw std::invalid_argument("map_time: correcting note without an end");
      const double u = smoothstep(phase.progress);
      return (1.0 - u) * expected + u * dx / (*note.t_end - note.t_start);
    }
  }
  return expected;
}

double map_time(const NoteWindow& note, double theta, double t, const MappingPhase& phase) {
  note.validate();
  const double upper = note.t_end ? std::min(t, *note.t_end) : t;
  if (theta < note.t_start || theta > upper) {
    throw std::invalid_argument("map_time: theta " + std::to_string(theta) +
                                " outside the note window");
  }
  // std::lerp is exact at both endpoints and monotone in its parameter.
  const auto over = [&](double end_time) {
    return std::lerp(note.x_start, note.x_end, (theta - note.t_start) / (end_time - note.t_start));
  };
  switch (phase.kind) {
    case MappingPhase::Kind::kExpected:
      return over(note.t_expected);
    case MappingPhase::Kind::kCompressing:
      return over(t);
    case MappingPhase::Kind::kFinalized:
      if (!note.t_end) throw std::invalid_argument("map_time: finalized note without an end");
      return over(*note.t_end);
    case MappingPhase::Kind::kCorrecting:
      if (!note.t_end) throw std::invalid_argument("map_time: correcting note without an end");
      return std::lerp(over(note.t_expected), over(*note.t_end), smoothstep(phase.progress));
  }
  return over(note.t_expected);
}

MappingPhase on_note_end(const NoteWindow& note, double t_end) {
  if (!(t_end > note.t_start)) throw std::invalid_argument("on_note_end: need t_next > t_i");
  if (t_end >= note.t_expected) return MappingPhase::finalized();
  return MappingPhase::correcting(0.0);
}

MappingPhase phase_at(const NoteWindow& note, double t, double anim_seconds) {
  if (!note.t_end || t < *note.t_end) {
    return t <= note.t_expected ? MappingPhase::expected() : MappingPhase::compressing();
  }
  if (*note.t_end >= note.t_expected) return MappingPhase::finalized();
  if (anim_seconds <= 0.0) return MappingPhase::finalized();
  const double progress = (t - *note.t_end) / anim_seconds;
  if (progress >= 1.0) return MappingPhase::finalized();
  return MappingPhase::correcting(progress);
}

}  // namespace fuguescope::timeline
