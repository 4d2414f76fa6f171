#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fuguescope/voice.hpp"

namespace fuguescope::layout {

enum class Emphasis { kNormal, kFinalEntry, kBachLetters };

std::string_view to_string(Emphasis e);

// One drawn curve piece: the (t1, t2, x1) triplet plus its paradigm.
struct Segment {
  std::size_t id = 0;  // position in the script's segment list
  Voice voice = Voice::kCello;
  double t1 = 0.0;  // beats
  double t2 = 0.0;  // beats
  double x1 = 0.0;  // normalized abscissa of the start
  std::string paradigm_id;
  bool inverted = false;
  Emphasis emphasis = Emphasis::kNormal;
  std::optional<std::string> fade_group;
  // Note boundaries inside (t1, t2); integer beats unless given explicitly.
  std::vector<double> onsets;

  double span_beats() const { return t2 - t1; }
  // t1, onsets..., t2
  std::vector<double> note_boundaries() const;
};

enum class CueAction { kFade, kReactivate, kLetters, kTerminalFade };

std::string_view to_string(CueAction a);

struct Cue {
  double beat = 0.0;
  CueAction action = CueAction::kFade;
  std::string target;  // fade group, or paradigm id for letters
  double span = 4.0;   // ramp length in beats
};

struct ParadigmaticScript {
  double pixels_per_beat = 0.02;
  double octave_height = 0.15;
  double y_reference = 0.5;  // height of 440 Hz
  std::array<std::vector<Segment>, kVoiceCount> voices;
  std::vector<Cue> cues;
  std::vector<std::string> warnings;  // non-fatal, e.g. coverage gaps

  const std::vector<Segment>& segments(Voice v) const { return voices[index_of(v)]; }
  double x_end(const Segment& s) const { return s.x1 + s.span_beats() * pixels_per_beat; }
  const Segment* find_paradigm(std::string_view paradigm_id) const;
};

// Validates and loads a segment script. Throws ConfigError naming the file
// and the offending entry on schema violations, reversed or overlapping
// segments, and unordered cues.
ParadigmaticScript load_script(const std::filesystem::path& path);
ParadigmaticScript parse_script(const nlohmann::json& doc, const std::string& source = "segments");

}  // namespace fuguescope::layout
