#include "fuguescope/layout/script.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "fuguescope/error.hpp"

namespace fuguescope::layout {
namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

class Context {
 public:
  explicit Context(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& where, const std::string& what) const {
    throw ConfigError(source_ + ": " + where + ": " + what);
  }

  double number(const nlohmann::json& obj, const char* key, const std::string& where) const {
    if (!obj.contains(key)) fail(where, std::string("missing field '") + key + "'");
    if (!obj[key].is_number()) fail(where, std::string("field '") + key + "' must be a number");
    const double v = obj[key].get<double>();
    if (!std::isfinite(v)) fail(where, std::string("field '") + key + "' must be finite");
    return v;
  }

  std::string string(const nlohmann::json& obj, const char* key, const std::string& where) const {
    if (!obj.contains(key)) fail(where, std::string("missing field '") + key + "'");
    if (!obj[key].is_string()) fail(where, std::string("field '") + key + "' must be a string");
    return obj[key].get<std::string>();
  }

 private:
  std::string source_;
};

Emphasis parse_emphasis(const std::string& s, const Context& ctx, const std::string& where) {
  if (s == "normal") return Emphasis::kNormal;
  if (s == "final_entry") return Emphasis::kFinalEntry;
  if (s == "bach_letters") return Emphasis::kBachLetters;
  ctx.fail(where, "unknown emphasis '" + s + "' (normal, final_entry, bach_letters)");
}

CueAction parse_action(const std::string& s, const Context& ctx, const std::string& where) {
  if (s == "fade") return CueAction::kFade;
  if (s == "reactivate") return CueAction::kReactivate;
  if (s == "letters") return CueAction::kLetters;
  if (s == "terminal_fade") return CueAction::kTerminalFade;
  ctx.fail(where, "unknown cue action '" + s + "' (fade, reactivate, letters, terminal_fade)");
}

}  // namespace

std::string_view to_string(Emphasis e) {
  switch (e) {
    case Emphasis::kNormal:
      return "normal";
    case Emphasis::kFinalEntry:
      return "final_entry";
    case Emphasis::kBachLetters:
      return "bach_letters";
  }
  return "normal";
}

std::string_view to_string(CueAction a) {
  switch (a) {
    case CueAction::kFade:
      return "fade";
    case CueAction::kReactivate:
      return "reactivate";
    case CueAction::kLetters:
      return "letters";
    case CueAction::kTerminalFade:
      return "terminal_fade";
  }
  return "fade";
}

std::vector<double> Segment::note_boundaries() const {
  std::vector<double> out;
  out.push_back(t1);
  out.insert(out.end(), onsets.begin(), onsets.end());
  out.push_back(t2);
  return out;
}

const Segment* ParadigmaticScript::find_paradigm(std::string_view paradigm_id) const {
  const Segment* first = nullptr;
  for (const auto& voice : voices) {
    for (const auto& s : voice) {
      if (s.paradigm_id == paradigm_id && (first == nullptr || s.t1 < first->t1)) first = &s;
    }
  }
  return first;
}

ParadigmaticScript parse_script(const nlohmann::json& doc, const std::string& source) {
  const Context ctx(source);
  if (!doc.is_object()) ctx.fail("document", "expected a JSON object");

  ParadigmaticScript script;
  script.pixels_per_beat = ctx.number(doc, "pixels_per_beat", "document");
  script.octave_height = ctx.number(doc, "octave_height", "document");
  if (doc.contains("y_reference")) script.y_reference = ctx.number(doc, "y_reference", "document");
  if (!(script.pixels_per_beat > 0.0)) ctx.fail("document", "pixels_per_beat must be positive");
  if (!(script.octave_height > 0.0)) ctx.fail("document", "octave_height must be positive");

  if (!doc.contains("segments") || !doc["segments"].is_array()) {
    ctx.fail("document", "missing array 'segments'");
  }
  std::set<std::string> fade_groups;
  const auto& segments = doc["segments"];
  for (std::size_t n = 0; n < segments.size(); ++n) {
    const auto& js = segments[n];
    const std::string where = "segments[" + std::to_string(n) + "]";
    if (!js.is_object()) ctx.fail(where, "expected an object");

    Segment s;
    s.id = n;
    const std::string voice = ctx.string(js, "voice", where);
    try {
      s.voice = parse_voice(voice);
    } catch (const ConfigError& e) {
      ctx.fail(where, e.what());
    }
    s.t1 = ctx.number(js, "t1", where);
    s.t2 = ctx.number(js, "t2", where);
    s.x1 = ctx.number(js, "x1", where);
    s.paradigm_id = ctx.string(js, "paradigm_id", where);
    if (js.contains("inverted")) {
      if (!js["inverted"].is_boolean()) ctx.fail(where, "field 'inverted' must be a boolean");
      s.inverted = js["inverted"].get<bool>();
    }
    if (js.contains("emphasis")) s.emphasis = parse_emphasis(ctx.string(js, "emphasis", where), ctx, where);
    if (js.contains("fade_group") && !js["fade_group"].is_null()) {
      s.fade_group = ctx.string(js, "fade_group", where);
      fade_groups.insert(*s.fade_group);
    }

    if (!(s.t2 > s.t1)) {
      ctx.fail(where, "triplet ordering violated: t2 (" + fmt(s.t2) + ") must exceed t1 (" + fmt(s.t1) + ")");
    }
    if (s.t1 < 0.0) ctx.fail(where, "t1 must be non-negative");
    if (!(s.x1 >= 0.0 && s.x1 < 1.0)) ctx.fail(where, "x1 (" + fmt(s.x1) + ") must lie in [0, 1)");

    if (js.contains("onsets")) {
      if (!js["onsets"].is_array()) ctx.fail(where, "field 'onsets' must be an array");
      double prev = s.t1;
      for (const auto& o : js["onsets"]) {
        if (!o.is_number()) ctx.fail(where, "onsets must be numbers");
        const double b = o.get<double>();
        if (!(b > prev && b < s.t2)) {
          ctx.fail(where, "onset " + fmt(b) + " must increase strictly inside (t1, t2)");
        }
        s.onsets.push_back(b);
        prev = b;
      }
    } else {
      for (double b = std::floor(s.t1) + 1.0; b < s.t2; b += 1.0) s.onsets.push_back(b);
    }

    auto& lane = script.voices[index_of(s.voice)];
    if (!lane.empty()) {
      const Segment& prev = lane.back();
      if (s.t1 < prev.t1) {
        ctx.fail(where, "segments of voice " + std::string(to_string(s.voice)) +
                            " out of order: t1 " + fmt(s.t1) + " precedes segments[" +
                            std::to_string(prev.id) + "] t1 " + fmt(prev.t1));
      }
      if (s.t1 < prev.t2) {
        ctx.fail(where, "overlaps segments[" + std::to_string(prev.id) + "] of voice " +
                            std::string(to_string(s.voice)) + ": [" + fmt(s.t1) + ", " + fmt(s.t2) +
                            ") intersects [" + fmt(prev.t1) + ", " + fmt(prev.t2) + ")");
      }
      if (s.t1 > prev.t2) {
        script.warnings.push_back(source + ": voice " + std::string(to_string(s.voice)) +
                                  " has no segment covering beats [" + fmt(prev.t2) + ", " +
                                  fmt(s.t1) + ")");
      }
    }
    lane.push_back(std::move(s));
  }

  if (doc.contains("cues")) {
    if (!doc["cues"].is_array()) ctx.fail("document", "field 'cues' must be an array");
    const auto& cues = doc["cues"];
    for (std::size_t n = 0; n < cues.size(); ++n) {
      const auto& jc = cues[n];
      const std::string where = "cues[" + std::to_string(n) + "]";
      if (!jc.is_object()) ctx.fail(where, "expected an object");
      Cue c;
      c.beat = ctx.number(jc, "beat", where);
      c.action = parse_action(ctx.string(jc, "action", where), ctx, where);
      if (jc.contains("target") && !jc["target"].is_null()) c.target = ctx.string(jc, "target", where);
      if (jc.contains("span")) c.span = ctx.number(jc, "span", where);
      if (!(c.span > 0.0)) ctx.fail(where, "span must be positive");
      if (!script.cues.empty() && c.beat < script.cues.back().beat) {
        ctx.fail(where, "cues must be sorted by beat (" + fmt(c.beat) + " after " +
                            fmt(script.cues.back().beat) + ")");
      }
      switch (c.action) {
        case CueAction::kFade:
        case CueAction::kReactivate:
          if (!fade_groups.contains(c.target)) {
            ctx.fail(where, "unknown fade_group '" + c.target + "'");
          }
          break;
        case CueAction::kLetters:
          if (script.find_paradigm(c.target) == nullptr) {
            ctx.fail(where, "letters target '" + c.target + "' names no paradigm_id");
          }
          break;
        case CueAction::kTerminalFade:
          break;
      }
      script.cues.push_back(std::move(c));
    }
  }
  return script;
}

ParadigmaticScript load_script(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open segment script");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }
  return parse_script(doc, path.string());
}

}  // namespace fuguescope::layout
