#include "fuguescope/layout/cues.hpp"

#include <algorithm>

namespace fuguescope::layout {
namespace {

double ramp(double from, double to, double start, double span, double beats) {
  const double p = std::clamp((beats - start) / span, 0.0, 1.0);
  return from + (to - from) * p;
}

struct Ramp {
  double from = 1.0;
  double to = 1.0;
  double start = 0.0;
  double span = 1.0;

  double at(double beats) const { return ramp(from, to, start, span, beats); }
};

}  // namespace

CueState apply_cues(const ParadigmaticScript& script, double beats) {
  CueState state;
  std::map<std::string, Ramp> groups;
  for (const auto& lane : script.voices) {
    for (const auto& s : lane) {
      if (s.fade_group) groups.emplace(*s.fade_group, Ramp{});
    }
  }
  Ramp global;

  for (const Cue& cue : script.cues) {
    if (cue.beat > beats) break;
    switch (cue.action) {
      case CueAction::kFade:
      case CueAction::kReactivate: {
        Ramp& r = groups[cue.target];
        const double now = r.at(cue.beat);
        r = Ramp{now, cue.action == CueAction::kFade ? 0.0 : 1.0, cue.beat, cue.span};
        break;
      }
      case CueAction::kLetters: {
        if (const Segment* s = script.find_paradigm(cue.target)) {
          state.letters = LetterAnnotation{s->id, s->voice, s->x1, cue.beat};
        }
        break;
      }
      case CueAction::kTerminalFade:
        global = Ramp{global.at(cue.beat), 0.0, cue.beat, cue.span};
        state.terminal = true;
        break;
    }
  }

  for (const auto& [name, r] : groups) state.group_opacity[name] = r.at(beats);
  state.global_opacity = global.at(beats);
  return state;
}

std::vector<std::size_t> cues_crossed(const ParadigmaticScript& script, double from, double to) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < script.cues.size(); ++i) {
    const double b = script.cues[i].beat;
    if (b > from && b <= to) out.push_back(i);
  }
  return out;
}

}  // namespace fuguescope::layout
