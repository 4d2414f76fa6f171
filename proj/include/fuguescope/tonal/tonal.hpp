#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fuguescope/tonal/tonal_script.hpp"

namespace fuguescope::tonal {

// Chromatic circle: pitch class p at p * 30 degrees from vertical, clockwise.
struct CircleGeometry {
  double radius = 1.0;

  double angle_degrees(PitchClass pc) const { return pc.value() * 30.0; }
  // x to the right, y up.
  std::pair<double, double> position(PitchClass pc) const;
};

// Chord whose [start_beat, end_beat) contains beats, or nullptr.
const Chord* current_chord(const TonalScript& script, double beats);
std::optional<std::size_t> current_chord_index(const TonalScript& script, double beats);

struct Triangle {
  std::array<PitchClass, 3> vertices;
  std::array<std::pair<double, double>, 3> points;
};

struct ChordShape {
  Triangle main;                    // root, third, fifth
  std::optional<Triangle> seventh;  // fifth, seventh, root
};

ChordShape triangle_of(const Chord& chord, const CircleGeometry& geometry = {});

struct Palette {
  std::string d = "red";
  std::string f = "cyan";
  std::string a = "green";
  std::string root = "orange";
  std::string fifth_perfect = "dark_green";
  std::string fifth_other = "grey";
  std::string third_major = "magenta";
  std::string third_minor = "violet";
  std::string seventh_minor = "brown";
  std::string seventh_major = "gold";
  std::string seventh_diminished = "olive";
  std::string neutral = "light_grey";  // lit lines outside the current chord
};

enum class Degree { kRoot, kThird, kFifth, kSeventh };
std::string_view to_string(Degree d);

// Color a chord tone takes from its degree alone.
std::string degree_color(const Chord& chord, Degree degree, const Palette& palette = {});

struct ToneStyle {
  PitchClass pc;
  std::string color;
  std::optional<Degree> degree;  // role in the current chord
};

struct EdgeStyle {
  PitchClass from;
  PitchClass to;
  std::string color;
};

struct ChordStyles {
  std::vector<ToneStyle> tones;  // main triad first, then remaining chord tones
  std::vector<EdgeStyle> edges;  // root-third, third-fifth, fifth-root, then seventh triangle edges
};

// Main-triad pitch classes keep red/cyan/green whatever their role. Other
// chord tones take their degree color. An edge takes the color of the
// interval it spans from the root: root-fifth is the fifth color, root-third
// the third color; third-fifth and seventh edges take the upper tone's color.
ChordStyles line_styles(const Chord* chord, const Palette& palette = {});

// Color of a pitch class given the current chord (nullptr when none).
std::string pitch_class_color(PitchClass pc, const Chord* chord, const Palette& palette = {});

// Sorted MIDI pitches lit at beats. A main-triad event stays lit from its
// beat on. Any other event goes dark at the end of the chord sounding at
// its beat, or at the start of the next chord if none was sounding.
std::vector<int> lit_lines(const TonalScript& script, double beats);

struct VoiceLeading {
  PitchClass from;
  PitchClass to;
  int semitones = 0;  // signed
  std::string label;  // "leading tone up" or "seventh down"
};

inline constexpr std::string_view kCadenceToken = "cadence_flourish";

struct RotationSpec {
  PitchClass from_root;
  PitchClass to_root;
  double angle_degrees = 150.0;  // clockwise
  double duration_seconds = 0.6;
  std::vector<PitchClass> held;  // common tones, ascending
  std::vector<VoiceLeading> moves;
  bool cadence = false;
  std::optional<std::string> emphasis_token;
};

// Rotation moving prev.root onto next.root. Throws std::invalid_argument
// unless next.root == prev.root + 5 (mod 12).
RotationSpec fifth_transition(const Chord& prev, const Chord& next, const CircleGeometry& geometry = {},
                              double duration_seconds = 0.6);

}  // namespace fuguescope::tonal
