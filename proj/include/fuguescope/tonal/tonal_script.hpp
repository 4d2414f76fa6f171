#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace fuguescope::tonal {

class PitchClass {
 public:
  constexpr PitchClass() = default;
  // Wraps any integer into 0..11.
  static constexpr PitchClass wrap(int v) { return PitchClass(((v % 12) + 12) % 12); }
  // Throws std::invalid_argument outside 0..11.
  static PitchClass of(int v);
  static PitchClass of_midi(int midi) { return wrap(midi); }

  constexpr int value() const { return value_; }
  constexpr PitchClass plus(int semitones) const { return wrap(value_ + semitones); }
  constexpr auto operator<=>(const PitchClass&) const = default;

 private:
  constexpr explicit PitchClass(int v) : value_(v) {}
  int value_ = 0;
};

// "C", "C#", "Db", "B♭", ... or nullopt.
std::optional<PitchClass> parse_pitch_class(std::string_view name);
std::string_view pitch_class_name(PitchClass pc);

enum class Third { kMajor, kMinor };
enum class Fifth { kPerfect, kOther };
enum class Seventh { kNone, kMinor, kMajor, kDiminished };

std::string_view to_string(Third t);
std::string_view to_string(Fifth f);
std::string_view to_string(Seventh s);

struct Chord {
  double start_beat = 0.0;
  double end_beat = 0.0;
  PitchClass root;
  Third third = Third::kMajor;
  Fifth fifth = Fifth::kPerfect;
  Seventh seventh = Seventh::kNone;
  bool descending_fifth_from_prev = false;
  bool cadence = false;

  PitchClass third_pc() const;
  // Perfect fifth is 7 semitones; "other" is diminished over a minor third,
  // augmented over a major third.
  PitchClass fifth_pc() const;
  std::optional<PitchClass> seventh_pc() const;
  // root, third, fifth[, seventh]
  std::vector<PitchClass> pitch_classes() const;
};

struct LitLineEvent {
  double beat = 0.0;
  int midi = 0;
};

// Key of D minor: D, F, A.
inline constexpr std::array<int, 3> kMainTriad = {2, 5, 9};
bool in_main_triad(PitchClass pc);

struct TonalScript {
  std::vector<Chord> chords;
  std::vector<LitLineEvent> lit_lines;
};

// Throws ConfigError with the file and entry on schema violations,
// unordered or overlapping chords, a desc5 flag that disagrees with the
// root motion ((prev.root + 5) mod 12 == root), or unsorted lit lines.
TonalScript load_tonal_script(const std::filesystem::path& path);
TonalScript parse_tonal_script(const nlohmann::json& doc, const std::string& source = "tonal");

}  // namespace fuguescope::tonal
