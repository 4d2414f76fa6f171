#include "fuguescope/tonal/tonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>

namespace fuguescope::tonal {
namespace {

bool contains(const std::vector<PitchClass>& set, PitchClass pc) {
  return std::find(set.begin(), set.end(), pc) != set.end();
}

std::string main_color(PitchClass pc, const Palette& palette) {
  switch (pc.value()) {
    case 2: return palette.d;
    case 5: return palette.f;
    default: return palette.a;
  }
}

Triangle make_triangle(std::array<PitchClass, 3> v, const CircleGeometry& geometry) {
  Triangle t;
  t.vertices = v;
  for (std::size_t i = 0; i < 3; ++i) t.points[i] = geometry.position(v[i]);
  return t;
}

// Beat at which a non-main-triad event stops being lit.
double expiry_of(const TonalScript& script, double beat) {
  for (const Chord& c : script.chords) {
    if (beat < c.start_beat) return c.start_beat;
    if (beat < c.end_beat) return c.end_beat;
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace

std::pair<double, double> CircleGeometry::position(PitchClass pc) const {
  const double rad = angle_degrees(pc) * std::numbers::pi / 180.0;
  return {radius * std::sin(rad), radius * std::cos(rad)};
}

std::optional<std::size_t> current_chord_index(const TonalScript& script, double beats) {
  auto it = std::upper_bound(script.chords.begin(), script.chords.end(), beats,
                             [](double b, const Chord& c) { return b < c.start_beat; });
  if (it == script.chords.begin()) return std::nullopt;
  --it;
  if (beats >= it->end_beat) return std::nullopt;
  return static_cast<std::size_t>(it - script.chords.begin());
}

const Chord* current_chord(const TonalScript& script, double beats) {
  auto idx = current_chord_index(script, beats);
  return idx ? &script.chords[*idx] : nullptr;
}

ChordShape triangle_of(const Chord& chord, const CircleGeometry& geometry) {
  ChordShape shape;
  shape.main = make_triangle({chord.root, chord.third_pc(), chord.fifth_pc()}, geometry);
  if (auto s = chord.seventh_pc()) {
    shape.seventh = make_triangle({chord.fifth_pc(), *s, chord.root}, geometry);
  }
  return shape;
}

std::string_view to_string(Degree d) {
  switch (d) {
    case Degree::kRoot: return "root";
    case Degree::kThird: return "third";
    case Degree::kFifth: return "fifth";
    case Degree::kSeventh: return "seventh";
  }
  return "root";
}

std::string degree_color(const Chord& chord, Degree degree, const Palette& palette) {
  switch (degree) {
    case Degree::kRoot: return palette.root;
    case Degree::kThird: return chord.third == Third::kMajor ? palette.third_major : palette.third_minor;
    case Degree::kFifth: return chord.fifth == Fifth::kPerfect ? palette.fifth_perfect : palette.fifth_other;
    case Degree::kSeventh:
      switch (chord.seventh) {
        case Seventh::kMajor: return palette.seventh_major;
        case Seventh::kDiminished: return palette.seventh_diminished;
        default: return palette.seventh_minor;
      }
  }
  return palette.neutral;
}

std::string pitch_class_color(PitchClass pc, const Chord* chord, const Palette& palette) {
  if (in_main_triad(pc)) return main_color(pc, palette);
  if (chord) {
    if (pc == chord->root) return degree_color(*chord, Degree::kRoot, palette);
    if (pc == chord->third_pc()) return degree_color(*chord, Degree::kThird, palette);
    if (pc == chord->fifth_pc()) return degree_color(*chord, Degree::kFifth, palette);
    if (chord->seventh_pc() == pc) return degree_color(*chord, Degree::kSeventh, palette);
  }
  return palette.neutral;
}

ChordStyles line_styles(const Chord* chord, const Palette& palette) {
  ChordStyles styles;
  auto role = [&](PitchClass pc) -> std::optional<Degree> {
    if (!chord) return std::nullopt;
    if (pc == chord->root) return Degree::kRoot;
    if (pc == chord->third_pc()) return Degree::kThird;
    if (pc == chord->fifth_pc()) return Degree::kFifth;
    if (chord->seventh_pc() == pc) return Degree::kSeventh;
    return std::nullopt;
  };
  for (int v : kMainTriad) {
    const PitchClass pc = PitchClass::of(v);
    styles.tones.push_back({pc, main_color(pc, palette), role(pc)});
  }
  if (!chord) return styles;

  for (PitchClass pc : chord->pitch_classes()) {
    if (in_main_triad(pc)) continue;
    styles.tones.push_back({pc, pitch_class_color(pc, chord, palette), role(pc)});
  }

  const PitchClass r = chord->root, t = chord->third_pc(), f = chord->fifth_pc();
  styles.edges.push_back({r, t, degree_color(*chord, Degree::kThird, palette)});
  styles.edges.push_back({t, f, degree_color(*chord, Degree::kFifth, palette)});
  styles.edges.push_back({f, r, degree_color(*chord, Degree::kFifth, palette)});
  if (auto s = chord->seventh_pc()) {
    const std::string c7 = degree_color(*chord, Degree::kSeventh, palette);
    styles.edges.push_back({f, *s, c7});
    styles.edges.push_back({*s, r, c7});
  }
  return styles;
}

std::vector<int> lit_lines(const TonalScript& script, double beats) {
  std::set<int> lit;
  for (const LitLineEvent& e : script.lit_lines) {
    if (e.beat > beats) break;
    if (in_main_triad(PitchClass::of_midi(e.midi)) || beats < expiry_of(script, e.beat)) {
      lit.insert(e.midi);
    }
  }
  return {lit.begin(), lit.end()};
}

RotationSpec fifth_transition(const Chord& prev, const Chord& next, const CircleGeometry& geometry,
                              double duration_seconds) {
  if (next.root != prev.root.plus(5)) {
    throw std::invalid_argument("fifth_transition: next root is not a descending fifth from the previous root");
  }
  RotationSpec spec;
  spec.from_root = prev.root;
  spec.to_root = next.root;
  spec.angle_degrees = geometry.angle_degrees(PitchClass::wrap(next.root.value() - prev.root.value()));
  spec.duration_seconds = duration_seconds;

  const auto from = prev.pitch_classes();
  const auto to = next.pitch_classes();
  for (PitchClass pc : from) {
    if (contains(to, pc) && !contains(spec.held, pc)) spec.held.push_back(pc);
  }
  std::sort(spec.held.begin(), spec.held.end());

  if (prev.third == Third::kMajor) {
    const PitchClass lt = prev.third_pc();
    if (!contains(to, lt) && contains(to, lt.plus(1))) {
      spec.moves.push_back({lt, lt.plus(1), 1, "leading tone up"});
    }
  }
  if (auto s = prev.seventh_pc(); s && !contains(to, *s)) {
    for (int d = 1; d <= 2; ++d) {
      if (contains(to, s->plus(-d))) {
        spec.moves.push_back({*s, s->plus(-d), -d, "seventh down"});
        break;
      }
    }
  }
  spec.cadence = next.cadence;
  if (next.cadence) spec.emphasis_token = std::string(kCadenceToken);
  return spec;
}

}  // namespace fuguescope::tonal
