#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fuguescope/layout/script.hpp"
#include "fuguescope/timeline/mapping.hpp"
#include "fuguescope/voice.hpp"

namespace fuguescope::timeline {

// Mapping of one note as it should be drawn from now on.
struct NoteMapping {
  std::uint64_t note_id = 0;
  Voice voice = Voice::kCello;
  const layout::Segment* segment = nullptr;
  NoteWindow window;
  MappingPhase phase;
  double slope = 0.0;  // x = x_start + (theta - t_start) * slope
};

struct HeadPoint {
  std::uint64_t note_id = 0;
  const layout::Segment* segment = nullptr;
  double theta = 0.0;
  double x = 0.0;
};

struct TrackerUpdate {
  std::optional<HeadPoint> head;      // nullopt in rests
  std::vector<NoteMapping> mappings;  // notes whose mapping changed this frame
};

// Turns the follower's score position into note windows for one voice.
// A note starts when the position enters a note's beat range and ends when
// it leaves it; the curve point played at t is drawn at map_time(theta = t).
class NoteTracker {
 public:
  NoteTracker(Voice voice, const layout::ParadigmaticScript& script, TempoModel tempo = {},
              double anim_seconds = kDefaultAnimSeconds);

  // Mappings are reported when a note starts, on every frame of compression
  // or correction, when it ends, and once when it becomes final.
  TrackerUpdate advance(double t, double beats);

  const TempoModel& tempo() const { return tempo_; }
  Voice voice() const { return voice_; }
  std::uint64_t notes_started() const { return next_id_; }

 private:
  struct Active {
    std::uint64_t id = 0;
    const layout::Segment* segment = nullptr;
    std::size_t note = 0;  // index into the segment's note boundaries
    double beats_span = 0.0;
    NoteWindow window;
  };

  NoteMapping mapping_of(const Active& a, double t, const MappingPhase& phase) const;

  Voice voice_;
  const layout::ParadigmaticScript* script_;
  TempoModel tempo_;
  double anim_seconds_;
  std::uint64_t next_id_ = 0;
  std::optional<Active> current_;
  std::vector<Active> settling_;  // ended notes still correcting
};

}  // namespace fuguescope::timeline
