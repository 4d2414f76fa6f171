#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fuguescope/layout/script.hpp"

namespace fuguescope::layout {

// B-flat, A, C, B-natural.
inline constexpr std::array<std::string_view, 4> kBachLetters = {"B♭", "A", "C", "B♮"};
inline constexpr std::array<int, 4> kBachPitchClasses = {10, 9, 0, 11};

struct LetterAnnotation {
  std::size_t segment_id = 0;
  Voice voice = Voice::kViola;
  double x = 0.0;  // start of the anchoring segment
  double beat = 0.0;  // when the letters appeared

  bool operator==(const LetterAnnotation&) const = default;
};

// Display state implied by all cues at or before a score position.
struct CueState {
  std::map<std::string, double> group_opacity;  // every fade group, 1 = visible
  double global_opacity = 1.0;  // terminal fade; letters are exempt
  bool terminal = false;
  std::optional<LetterAnnotation> letters;

  bool operator==(const CueState&) const = default;
};

// Pure in (script, beats): replaying the same position yields the same state.
CueState apply_cues(const ParadigmaticScript& script, double beats);

// Indices of cues with from < beat <= to.
std::vector<std::size_t> cues_crossed(const ParadigmaticScript& script, double from, double to);

}  // namespace fuguescope::layout
