#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "fuguescope/error.hpp"
#include "fuguescope/tonal/tonal.hpp"
#include "fuguescope/tonal/tonal_script.hpp"
#include "synth.hpp"

using namespace fuguescope;
using namespace fuguescope::tonal;
using nlohmann::json;

namespace {

Chord make(int root, Third third, Seventh seventh = Seventh::kNone, Fifth fifth = Fifth::kPerfect) {
  Chord c;
  c.root = PitchClass::of(root);
  c.third = third;
  c.fifth = fifth;
  c.seventh = seventh;
  return c;
}

std::vector<int> values(const std::vector<PitchClass>& pcs) {
  std::vector<int> out;
  for (auto pc : pcs) out.push_back(pc.value());
  return out;
}

std::vector<int> values(const std::array<PitchClass, 3>& pcs) { return values(std::vector<PitchClass>(pcs.begin(), pcs.end())); }

// Mini script with hand-computed expectations.
TonalScript mini_script() {
  return parse_tonal_script(json{
      {"chords",
       {{{"start", 0}, {"end", 4}, {"root", "D"}, {"third", "minor"}},
        {{"start", 4}, {"end", 8}, {"root", "A"}, {"third", "major"}, {"seventh", "minor"}},
        {{"start", 8}, {"end", 12}, {"root", "D"}, {"third", "minor"}, {"desc5", true}, {"cadence", true}}}},
      {"lit_lines",
       {{{"beat", 0}, {"midi", 62}},
        {{"beat", 1}, {"midi", 69}},
        {{"beat", 2}, {"midi", 65}},
        {{"beat", 4.5}, {"midi", 61}},
        {{"beat", 5}, {"midi", 64}},
        {{"beat", 6}, {"midi", 67}},
        {{"beat", 8}, {"midi", 74}},
        {{"beat", 13}, {"midi", 71}}}}});
}

int signed_step(PitchClass from, PitchClass to) {
  int d = (to.value() - from.value() + 12) % 12;
  return d > 6 ? d - 12 : d;
}

}  // namespace

TEST_CASE("pitch classes") {
  CHECK(PitchClass::wrap(-1).value() == 11);
  CHECK(PitchClass::of_midi(62).value() == 2);
  CHECK_THROWS_AS(PitchClass::of(12), std::invalid_argument);
  CHECK(parse_pitch_class("C#")->value() == 1);
  CHECK(parse_pitch_class("Db")->value() == 1);
  CHECK(parse_pitch_class("B♭")->value() == 10);
  CHECK(parse_pitch_class("B♮")->value() == 11);
  CHECK_FALSE(parse_pitch_class("H"));
  CHECK(pitch_class_name(PitchClass::of(10)) == "Bb");
}

TEST_CASE("circle geometry") {
  const CircleGeometry g{2.0};
  CHECK(g.angle_degrees(PitchClass::of(0)) == 0.0);
  CHECK(g.angle_degrees(PitchClass::of(3)) == 90.0);
  const auto [x, y] = g.position(PitchClass::of(3));
  CHECK(x == doctest::Approx(2.0));
  CHECK(y == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(g.position(PitchClass::of(6)).second == doctest::Approx(-2.0));
}

TEST_CASE("current chord uses half-open intervals") {
  const auto s = parse_tonal_script(json{{"chords",
                                          {{{"start", 0}, {"end", 4}, {"root", 2}, {"third", "minor"}},
                                           {{"start", 6}, {"end", 8}, {"root", 9}}}}});
  CHECK(current_chord(s, 0.0) == &s.chords[0]);
  CHECK(current_chord(s, 4.0) == nullptr);
  CHECK(current_chord(s, 5.0) == nullptr);
  CHECK(current_chord(s, 6.0) == &s.chords[1]);
  CHECK(current_chord_index(s, 7.9) == 1u);
  CHECK(current_chord(s, 8.0) == nullptr);
  CHECK(current_chord(s, -1.0) == nullptr);
}

TEST_CASE("triangles") {
  const auto dm = triangle_of(make(2, Third::kMinor));
  CHECK(values(dm.main.vertices) == std::vector<int>{2, 5, 9});
  CHECK_FALSE(dm.seventh);
  const auto a7 = triangle_of(make(9, Third::kMajor, Seventh::kMinor));
  CHECK(values(a7.main.vertices) == std::vector<int>{9, 1, 4});
  REQUIRE(a7.seventh);
  auto sev = values(a7.seventh->vertices);
  std::sort(sev.begin(), sev.end());
  CHECK(sev == std::vector<int>{4, 7, 9});
  CHECK(make(4, Third::kMinor, Seventh::kNone, Fifth::kOther).fifth_pc().value() == 10);
  CHECK(make(0, Third::kMajor, Seventh::kNone, Fifth::kOther).fifth_pc().value() == 8);
  CHECK(make(0, Third::kMajor, Seventh::kMajor).seventh_pc()->value() == 11);
  CHECK(make(11, Third::kMinor, Seventh::kDiminished, Fifth::kOther).seventh_pc()->value() == 8);
}

TEST_CASE("colors") {
  const Palette p;
  const Chord dm = make(2, Third::kMinor);
  CHECK(pitch_class_color(PitchClass::of(2), &dm, p) == "red");
  CHECK(pitch_class_color(PitchClass::of(5), &dm, p) == "cyan");
  CHECK(pitch_class_color(PitchClass::of(9), &dm, p) == "green");
  const Chord g = make(7, Third::kMinor);
  CHECK(pitch_class_color(PitchClass::of(7), &g, p) == "orange");
  CHECK(pitch_class_color(PitchClass::of(2), &g, p) == "red");
  CHECK(degree_color(g, Degree::kFifth, p) == "dark_green");
  CHECK(degree_color(make(4, Third::kMinor, Seventh::kNone, Fifth::kOther), Degree::kFifth, p) == "grey");
  CHECK(pitch_class_color(PitchClass::of(10), &g, p) == "violet");
  const Chord gmaj = make(7, Third::kMajor);
  CHECK(pitch_class_color(PitchClass::of(11), &gmaj, p) == "magenta");
  CHECK(pitch_class_color(PitchClass::of(0), &g, p) == "light_grey");
  CHECK(pitch_class_color(PitchClass::of(0), nullptr, p) == "light_grey");
  CHECK(pitch_class_color(PitchClass::of(5), nullptr, p) == "cyan");
}

TEST_CASE("edges inherit degree colors") {
  const Chord g7 = make(7, Third::kMajor, Seventh::kMinor);
  const auto styles = line_styles(&g7);
  REQUIRE(styles.edges.size() == 5);
  CHECK(styles.edges[0].color == "magenta");     // root-third
  CHECK(styles.edges[2].color == "dark_green");  // fifth-root
  CHECK(styles.edges[2].from.value() == 2);
  CHECK(styles.edges[2].to.value() == 7);
  CHECK(styles.edges[3].color == "brown");
  CHECK(styles.edges[4].color == "brown");
  CHECK(styles.tones.front().pc.value() == 2);
  CHECK(styles.tones.front().color == "red");
  CHECK(line_styles(nullptr).edges.empty());
}

TEST_CASE("desc5 flag must match the root motion") {
  auto chords = [](json second) {
    return json{{"chords", {{{"start", 0}, {"end", 4}, {"root", 9}}, second}}};
  };
  CHECK_NOTHROW(parse_tonal_script(chords({{"start", 4}, {"end", 8}, {"root", 2}, {"desc5", true}})));
  CHECK_THROWS_WITH_AS(parse_tonal_script(chords({{"start", 4}, {"end", 8}, {"root", 4}, {"desc5", true}})),
                       doctest::Contains("is not a descending fifth"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_tonal_script(chords({{"start", 4}, {"end", 8}, {"root", 2}})),
                       doctest::Contains("desc5 is not set"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_tonal_script(json{{"chords", {{{"start", 0}, {"end", 4}, {"root", 9}, {"desc5", true}}}}}),
      doctest::Contains("first chord"), ConfigError);
}

TEST_CASE("tonal script validation") {
  CHECK_THROWS_WITH_AS(parse_tonal_script(json{{"chords", {{{"start", 4}, {"end", 4}, {"root", 2}}}}}),
                       doctest::Contains("chords[0]: end (4) must exceed start (4)"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_tonal_script(json{{"chords",
                                                {{{"start", 0}, {"end", 4}, {"root", 2}},
                                                 {{"start", 3}, {"end", 6}, {"root", 4}}}}}),
                       doctest::Contains("overlaps chords[0]"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_tonal_script(json{{"chords", json::array()},
                                               {"lit_lines", {{{"beat", 2}, {"midi", 60}}, {{"beat", 1}, {"midi", 62}}}}}),
                       doctest::Contains("sorted by beat"), ConfigError);
  CHECK_THROWS_AS(parse_tonal_script(json{{"chords", json::array()}, {"lit_lines", {{{"beat", 0}, {"midi", 200}}}}}),
                  ConfigError);
  CHECK_THROWS_WITH_AS(load_tonal_script("/nonexistent/tonal.json"), doctest::Contains("/nonexistent/tonal.json"),
                       ConfigError);
}

TEST_CASE("lit lines on the mini script") {
  const auto s = mini_script();
  CHECK(lit_lines(s, -0.5).empty());
  CHECK(lit_lines(s, 2.0) == std::vector<int>{62, 65, 69});
  CHECK(lit_lines(s, 4.5) == std::vector<int>{61, 62, 65, 69});
  CHECK(lit_lines(s, 6.0) == std::vector<int>{61, 62, 64, 65, 67, 69});
  CHECK(lit_lines(s, 8.0) == std::vector<int>{62, 65, 69, 74});
  CHECK(lit_lines(s, 13.0) == std::vector<int>{62, 65, 69, 71, 74});
}

TEST_CASE("a non-main line lit in a gap expires at the next chord") {
  const auto s = parse_tonal_script(json{{"chords",
                                          {{{"start", 0}, {"end", 4}, {"root", 2}, {"third", "minor"}},
                                           {{"start", 6}, {"end", 8}, {"root", 7}, {"third", "minor"}, {"desc5", true}}}},
                                         {"lit_lines", {{{"beat", 5}, {"midi", 60}}}}});
  CHECK(lit_lines(s, 5.5) == std::vector<int>{60});
  CHECK(lit_lines(s, 6.0).empty());
}

TEST_CASE("A7 to Dm rotation") {
  const Chord a7 = make(9, Third::kMajor, Seventh::kMinor);
  Chord dm = make(2, Third::kMinor);
  dm.cadence = true;
  const auto r = fifth_transition(a7, dm);
  CHECK(r.angle_degrees == 150.0);
  CHECK(values(r.held) == std::vector<int>{9});
  REQUIRE(r.moves.size() == 2);
  CHECK(r.moves[0].from.value() == 1);
  CHECK(r.moves[0].to.value() == 2);
  CHECK(r.moves[0].semitones == 1);
  CHECK(r.moves[1].from.value() == 7);
  CHECK(r.moves[1].to.value() == 5);
  CHECK(r.moves[1].semitones == -2);
  CHECK(r.moves[1].label == "seventh down");
  CHECK(r.emphasis_token == std::string(kCadenceToken));
  CHECK_THROWS_AS(fifth_transition(dm, a7), std::invalid_argument);
}

TEST_CASE("rotation motions match exhaustive enumeration") {
  for (int root = 0; root < 12; ++root) {
    for (Third third : {Third::kMajor, Third::kMinor}) {
      for (Seventh seventh : {Seventh::kNone, Seventh::kMinor, Seventh::kMajor}) {
        for (Third next_third : {Third::kMajor, Third::kMinor}) {
          const Chord prev = make(root, third, seventh);
          const Chord next = make((root + 5) % 12, next_third);
          const auto r = fifth_transition(prev, next);
          const auto from = prev.pitch_classes();
          const auto to = next.pitch_classes();

          std::set<int> held;
          for (auto a : from)
            for (auto b : to)
              if (a == b) held.insert(a.value());
          CHECK(values(r.held) == std::vector<int>(held.begin(), held.end()));

          // Every reported motion is a real step between the two sets.
          for (const auto& m : r.moves) {
            CHECK(std::find(from.begin(), from.end(), m.from) != from.end());
            CHECK(std::find(to.begin(), to.end(), m.to) != to.end());
            CHECK(std::find(to.begin(), to.end(), m.from) == to.end());
            CHECK(signed_step(m.from, m.to) == m.semitones);
          }
          // Leading tone: a major third moving up a semitone onto a next-chord tone.
          const bool lt = third == Third::kMajor &&
                          std::find(to.begin(), to.end(), prev.third_pc()) == to.end() &&
                          std::find(to.begin(), to.end(), prev.third_pc().plus(1)) != to.end();
          const bool has_lt = std::any_of(r.moves.begin(), r.moves.end(),
                                          [](const VoiceLeading& m) { return m.semitones == 1; });
          CHECK(lt == has_lt);
          // Seventh: the smallest downward step onto a next-chord tone.
          if (auto s = prev.seventh_pc(); s && std::find(to.begin(), to.end(), *s) == to.end()) {
            int best = 0;
            for (auto b : to) {
              const int d = signed_step(*s, b);
              if (d < 0 && d >= -2 && (best == 0 || d > best)) best = d;
            }
            const auto it = std::find_if(r.moves.begin(), r.moves.end(),
                                         [](const VoiceLeading& m) { return m.label == "seventh down"; });
            if (best == 0) {
              CHECK(it == r.moves.end());
            } else {
              REQUIRE(it != r.moves.end());
              CHECK(it->semitones == best);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("excerpt tonal script loads") {
  const auto s = parse_tonal_script(testing::tonal_script(testing::quartet_excerpt()));
  CHECK(s.chords.size() == 12);
  CHECK(lit_lines(s, 0.0) == std::vector<int>{62});
}
