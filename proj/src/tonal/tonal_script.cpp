#include "fuguescope/tonal/tonal_script.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fuguescope/error.hpp"

namespace fuguescope::tonal {
namespace {

constexpr std::array<std::string_view, 12> kNames = {"C",  "C#", "D",  "Eb", "E",  "F",
                                                     "F#", "G",  "Ab", "A",  "Bb", "B"};

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string describe(PitchClass pc) {
  return std::string(pitch_class_name(pc)) + " (" + std::to_string(pc.value()) + ")";
}

}  // namespace

PitchClass PitchClass::of(int v) {
  if (v < 0 || v > 11) throw std::invalid_argument("pitch class must lie in 0..11");
  return PitchClass(v);
}

std::optional<PitchClass> parse_pitch_class(std::string_view name) {
  if (name.empty()) return std::nullopt;
  int base = 0;
  switch (name[0]) {
    case 'C': base = 0; break;
    case 'D': base = 2; break;
    case 'E': base = 4; break;
    case 'F': base = 5; break;
    case 'G': base = 7; break;
    case 'A': base = 9; break;
    case 'B': base = 11; break;
    default: return std::nullopt;
  }
  std::string_view rest = name.substr(1);
  if (rest.empty() || rest == "♮") return PitchClass::wrap(base);
  if (rest == "#" || rest == "♯") return PitchClass::wrap(base + 1);
  if (rest == "b" || rest == "♭") return PitchClass::wrap(base - 1);
  return std::nullopt;
}

std::string_view pitch_class_name(PitchClass pc) { return kNames[static_cast<std::size_t>(pc.value())]; }

std::string_view to_string(Third t) { return t == Third::kMajor ? "major" : "minor"; }
std::string_view to_string(Fifth f) { return f == Fifth::kPerfect ? "perfect" : "other"; }
std::string_view to_string(Seventh s) {
  switch (s) {
    case Seventh::kNone: return "none";
    case Seventh::kMinor: return "minor";
    case Seventh::kMajor: return "major";
    case Seventh::kDiminished: return "diminished";
  }
  return "none";
}

PitchClass Chord::third_pc() const { return root.plus(third == Third::kMajor ? 4 : 3); }

PitchClass Chord::fifth_pc() const {
  if (fifth == Fifth::kPerfect) return root.plus(7);
  return root.plus(third == Third::kMinor ? 6 : 8);
}

std::optional<PitchClass> Chord::seventh_pc() const {
  switch (seventh) {
    case Seventh::kNone: return std::nullopt;
    case Seventh::kMinor: return root.plus(10);
    case Seventh::kMajor: return root.plus(11);
    case Seventh::kDiminished: return root.plus(9);
  }
  return std::nullopt;
}

std::vector<PitchClass> Chord::pitch_classes() const {
  std::vector<PitchClass> out = {root, third_pc(), fifth_pc()};
  if (auto s = seventh_pc()) out.push_back(*s);
  return out;
}

bool in_main_triad(PitchClass pc) {
  return std::find(kMainTriad.begin(), kMainTriad.end(), pc.value()) != kMainTriad.end();
}

TonalScript parse_tonal_script(const nlohmann::json& doc, const std::string& source) {
  auto fail = [&](const std::string& where, const std::string& what) -> void {
    throw ConfigError(source + ": " + where + ": " + what);
  };
  auto number = [&](const nlohmann::json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_number()) {
      fail(where, std::string("field '") + key + "' must be a number");
    }
    return obj[key].get<double>();
  };
  auto flag = [&](const nlohmann::json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) return false;
    if (!obj[key].is_boolean()) fail(where, std::string("field '") + key + "' must be a boolean");
    return obj[key].get<bool>();
  };
  auto word = [&](const nlohmann::json& obj, const char* key, const std::string& where,
                  const char* fallback) -> std::string {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_string()) fail(where, std::string("field '") + key + "' must be a string");
    return obj[key].get<std::string>();
  };

  if (!doc.is_object()) fail("document", "expected a JSON object");
  if (!doc.contains("chords") || !doc["chords"].is_array()) fail("document", "missing array 'chords'");

  TonalScript script;
  const auto& chords = doc["chords"];
  for (std::size_t n = 0; n < chords.size(); ++n) {
    const auto& jc = chords[n];
    const std::string where = "chords[" + std::to_string(n) + "]";
    if (!jc.is_object()) fail(where, "expected an object");
    Chord c;
    c.start_beat = number(jc, "start", where);
    c.end_beat = number(jc, "end", where);
    if (!(c.end_beat > c.start_beat)) {
      fail(where, "end (" + fmt(c.end_beat) + ") must exceed start (" + fmt(c.start_beat) + ")");
    }

    if (!jc.contains("root")) fail(where, "missing field 'root'");
    const auto& root = jc["root"];
    if (root.is_number_integer()) {
      const int v = root.get<int>();
      if (v < 0 || v > 11) fail(where, "root " + std::to_string(v) + " outside 0..11");
      c.root = PitchClass::of(v);
    } else if (root.is_string()) {
      auto pc = parse_pitch_class(root.get<std::string>());
      if (!pc) fail(where, "unknown root name '" + root.get<std::string>() + "'");
      c.root = *pc;
    } else {
      fail(where, "root must be an integer 0..11 or a note name");
    }

    const std::string third = word(jc, "third", where, "major");
    if (third == "major") c.third = Third::kMajor;
    else if (third == "minor") c.third = Third::kMinor;
    else fail(where, "third must be 'major' or 'minor'");

    const std::string fifth = word(jc, "fifth", where, "perfect");
    if (fifth == "perfect") c.fifth = Fifth::kPerfect;
    else if (fifth == "other") c.fifth = Fifth::kOther;
    else fail(where, "fifth must be 'perfect' or 'other'");

    const std::string seventh = word(jc, "seventh", where, "none");
    if (seventh == "none") c.seventh = Seventh::kNone;
    else if (seventh == "minor") c.seventh = Seventh::kMinor;
    else if (seventh == "major") c.seventh = Seventh::kMajor;
    else if (seventh == "diminished") c.seventh = Seventh::kDiminished;
    else fail(where, "seventh must be none, minor, major or diminished");

    c.descending_fifth_from_prev = flag(jc, "desc5", where);
    c.cadence = flag(jc, "cadence", where);

    if (!script.chords.empty()) {
      const Chord& prev = script.chords.back();
      if (c.start_beat < prev.end_beat) {
        fail(where, "overlaps chords[" + std::to_string(n - 1) + "]: starts at " + fmt(c.start_beat) +
                        " before previous end " + fmt(prev.end_beat));
      }
      const PitchClass expected = prev.root.plus(5);
      const bool is_fifth = c.root == expected;
      if (c.descending_fifth_from_prev && !is_fifth) {
        fail(where, "desc5 flag set but root " + describe(c.root) +
                        " is not a descending fifth from previous root " + describe(prev.root) +
                        " (expected " + describe(expected) + ")");
      }
      if (!c.descending_fifth_from_prev && is_fifth) {
        fail(where, "root " + describe(c.root) + " descends a fifth from previous root " +
                        describe(prev.root) + " but desc5 is not set");
      }
    } else if (c.descending_fifth_from_prev) {
      fail(where, "desc5 flag set on the first chord (no previous chord)");
    }
    script.chords.push_back(c);
  }

  if (doc.contains("lit_lines")) {
    if (!doc["lit_lines"].is_array()) fail("document", "field 'lit_lines' must be an array");
    const auto& lines = doc["lit_lines"];
    for (std::size_t n = 0; n < lines.size(); ++n) {
      const auto& jl = lines[n];
      const std::string where = "lit_lines[" + std::to_string(n) + "]";
      if (!jl.is_object()) fail(where, "expected an object");
      LitLineEvent e;
      e.beat = number(jl, "beat", where);
      if (!jl.contains("midi") || !jl["midi"].is_number_integer()) {
        fail(where, "field 'midi' must be an integer");
      }
      e.midi = jl["midi"].get<int>();
      if (e.midi < 0 || e.midi > 127) fail(where, "midi " + std::to_string(e.midi) + " outside 0..127");
      if (!script.lit_lines.empty() && e.beat < script.lit_lines.back().beat) {
        fail(where, "lit_lines must be sorted by beat");
      }
      script.lit_lines.push_back(e);
    }
  }
  return script;
}

TonalScript load_tonal_script(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open tonal script");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }
  return parse_tonal_script(doc, path.string());
}

}  // namespace fuguescope::tonal
