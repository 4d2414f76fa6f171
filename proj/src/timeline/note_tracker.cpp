#include "fuguescope/timeline/note_tracker.hpp"

#include <algorithm>

#include "fuguescope/layout/layout.hpp"

namespace fuguescope::timeline {

NoteTracker::NoteTracker(Voice voice, const layout::ParadigmaticScript& script, TempoModel tempo,
                         double anim_seconds)
    : voice_(voice), script_(&script), tempo_(tempo), anim_seconds_(anim_seconds) {}

NoteMapping NoteTracker::mapping_of(const Active& a, double t, const MappingPhase& phase) const {
  return NoteMapping{a.id, voice_, a.segment, a.window, phase, mapping_slope(a.window, t, phase)};
}

TrackerUpdate NoteTracker::advance(double t, double beats) {
  TrackerUpdate out;

  const auto loc = layout::locate(*script_, voice_, beats);
  std::size_t note = 0;
  std::vector<double> bounds;
  if (loc) {
    bounds = loc->segment->note_boundaries();
    auto it = std::upper_bound(bounds.begin(), bounds.end(), beats);
    note = static_cast<std::size_t>(std::distance(bounds.begin(), it)) - 1;
    note = std::min(note, bounds.size() - 2);
  }

  if (current_) {
    const bool same = loc && loc->segment == current_->segment && note == current_->note;
    if (!same) {
      Active ended = *current_;
      current_.reset();
      if (t > ended.window.t_start) {
        ended.window.t_end = t;
        tempo_.observe(t - ended.window.t_start, ended.beats_span);
        const MappingPhase phase = phase_at(ended.window, t, anim_seconds_);
        out.mappings.push_back(mapping_of(ended, t, phase));
        if (phase.kind != MappingPhase::Kind::kFinalized) settling_.push_back(ended);
      }
    }
  }

  for (auto it = settling_.begin(); it != settling_.end();) {
    if (it->window.t_end && *it->window.t_end == t) {
      ++it;
      continue;
    }
    const MappingPhase phase = phase_at(it->window, t, anim_seconds_);
    out.mappings.push_back(mapping_of(*it, t, phase));
    if (phase.kind == MappingPhase::Kind::kFinalized) {
      it = settling_.erase(it);
    } else {
      ++it;
    }
  }

  if (loc && !current_) {
    const layout::Segment& seg = *loc->segment;
    const double end_beat = bounds[note + 1];
    const double span = end_beat - beats;
    const double x_end = seg.x1 + (end_beat - seg.t1) * script_->pixels_per_beat;
    if (span > 0.0 && x_end > loc->x) {
      Active a;
      a.id = next_id_++;
      a.segment = &seg;
      a.note = note;
      a.beats_span = span;
      a.window.t_start = t;
      a.window.t_expected = expected_end(t, span, tempo_);
      a.window.x_start = loc->x;
      a.window.x_end = x_end;
      current_ = a;
      out.mappings.push_back(mapping_of(a, t, MappingPhase::expected()));
    }
  } else if (current_) {
    const MappingPhase phase = phase_at(current_->window, t, anim_seconds_);
    if (phase.kind == MappingPhase::Kind::kCompressing) {
      out.mappings.push_back(mapping_of(*current_, t, phase));
    }
  }

  if (current_) {
    const MappingPhase phase = phase_at(current_->window, t, anim_seconds_);
    out.head = HeadPoint{current_->id, current_->segment, t, map_time(current_->window, t, t, phase)};
  }
  return out;
}

}  // namespace fuguescope::timeline
