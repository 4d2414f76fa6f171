#include <doctest.h>

#include <random>

#include "fuguescope/layout/script.hpp"
#include "fuguescope/timeline/mapping.hpp"
#include "fuguescope/timeline/note_tracker.hpp"

using namespace fuguescope;
using namespace fuguescope::timeline;

namespace {

NoteWindow unit_note() {
  NoteWindow n;
  n.t_start = 0.0;
  n.t_expected = 2.0;
  n.x_start = 0.0;
  n.x_end = 1.0;
  return n;
}

layout::ParadigmaticScript one_segment_script() {
  return layout::parse_script(nlohmann::json{
      {"pixels_per_beat", 0.1},
      {"octave_height", 0.15},
      {"segments", {{{"voice", "viola"}, {"t1", 0}, {"t2", 4}, {"x1", 0.2}, {"paradigm_id", "A"}}}}});
}

}  // namespace

TEST_CASE("expected_end scales the previous note tempo") {
  TempoModel tempo;
  tempo.observe(0.6, 1.0);
  CHECK(expected_end(10.0, 0.5, tempo) == doctest::Approx(10.3));
  CHECK(expected_end(0.0, 1.0, TempoModel{0.5}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(expected_end(0.0, 0.0, tempo), std::invalid_argument);
}

TEST_CASE("tempo updates are clamped to a factor of four") {
  TempoModel tempo{0.5};
  tempo.observe(100.0, 1.0);
  CHECK(tempo.seconds_per_beat == doctest::Approx(2.0));
  tempo.observe(0.001, 1.0);
  CHECK(tempo.seconds_per_beat == doctest::Approx(0.5));
  tempo.observe(0.0, 1.0);
  CHECK(tempo.seconds_per_beat == doctest::Approx(0.5));
}

TEST_CASE("map_time examples") {
  NoteWindow n = unit_note();
  CHECK(map_time(n, 1.0, 1.0, MappingPhase::expected()) == doctest::Approx(0.5));
  CHECK(map_time(n, 2.0, 4.0, MappingPhase::compressing()) == doctest::Approx(0.5));
  CHECK(map_time(n, 4.0, 4.0, MappingPhase::compressing()) == 1.0);
  n.t_end = 2.0;
  for (double t : {2.0, 3.0, 100.0}) {
    CHECK(map_time(n, 1.0, t, MappingPhase::finalized()) == doctest::Approx(0.5));
  }
}

TEST_CASE("map_time rejects theta outside the window and bad windows") {
  NoteWindow n = unit_note();
  CHECK_THROWS_AS(map_time(n, -0.1, 1.0, MappingPhase::expected()), std::invalid_argument);
  CHECK_THROWS_AS(map_time(n, 1.5, 1.0, MappingPhase::expected()), std::invalid_argument);
  n.t_expected = 0.0;
  CHECK_THROWS_AS(map_time(n, 0.0, 0.0, MappingPhase::expected()), std::invalid_argument);
  n = unit_note();
  n.x_end = 0.0;
  CHECK_THROWS_AS(map_time(n, 0.0, 0.0, MappingPhase::expected()), std::invalid_argument);
  n = unit_note();
  CHECK_THROWS_AS(map_time(n, 0.5, 1.0, MappingPhase::finalized()), std::invalid_argument);
}

TEST_CASE("note end transitions") {
  NoteWindow n = unit_note();
  CHECK(on_note_end(n, 2.0).kind == MappingPhase::Kind::kFinalized);
  CHECK(on_note_end(n, 3.0).kind == MappingPhase::Kind::kFinalized);
  const auto fast = on_note_end(n, 1.5);
  CHECK(fast.kind == MappingPhase::Kind::kCorrecting);
  CHECK(fast.progress == 0.0);
  CHECK_THROWS_AS(on_note_end(n, 0.0), std::invalid_argument);

  n.t_end = 1.5;
  CHECK(phase_at(n, 1.5).kind == MappingPhase::Kind::kCorrecting);
  CHECK(phase_at(n, 1.6).progress == doctest::Approx(0.4));
  CHECK(phase_at(n, 1.75).kind == MappingPhase::Kind::kFinalized);
  n.t_end = 3.0;
  CHECK(phase_at(n, 2.5).kind == MappingPhase::Kind::kCompressing);
  CHECK(phase_at(n, 3.0).kind == MappingPhase::Kind::kFinalized);
}

TEST_CASE("smoothstep endpoints and symmetry") {
  CHECK(smoothstep(0.0) == 0.0);
  CHECK(smoothstep(1.0) == 1.0);
  CHECK(smoothstep(0.5) == 0.5);
  CHECK(smoothstep(-1.0) == 0.0);
  CHECK(smoothstep(0.3) + smoothstep(0.7) == doctest::Approx(1.0));
}

TEST_CASE("mapping properties over random windows") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    NoteWindow n;
    n.t_start = 100.0 * u(rng);
    n.t_expected = n.t_start + 0.01 + 3.0 * u(rng);
    n.x_start = 0.9 * u(rng);
    n.x_end = n.x_start + 1e-3 + (1.0 - n.x_start - 1e-3) * u(rng);
    const double theta_a = n.t_start + u(rng) * (n.t_expected - n.t_start);
    const double theta_b = n.t_start + u(rng) * (n.t_expected - n.t_start);

    // Expected: endpoints exact, independent of t, monotone in theta.
    CHECK(map_time(n, n.t_start, n.t_start, MappingPhase::expected()) == n.x_start);
    CHECK(map_time(n, n.t_expected, n.t_expected, MappingPhase::expected()) == n.x_end);
    const double t1 = std::max(theta_a, theta_b);
    const double t2 = t1 + u(rng) * (n.t_expected - t1);
    CHECK(map_time(n, theta_a, t1, MappingPhase::expected()) == map_time(n, theta_a, t2, MappingPhase::expected()));
    if (theta_a <= theta_b) {
      CHECK(map_time(n, theta_a, t1, MappingPhase::expected()) <= map_time(n, theta_b, t1, MappingPhase::expected()));
    }

    // Compressing: head pinned at x_end, everything inside the window.
    const double late = n.t_expected + 2.0 * u(rng) + 1e-6;
    CHECK(map_time(n, late, late, MappingPhase::compressing()) == n.x_end);
    const double xc = map_time(n, theta_a, late, MappingPhase::compressing());
    CHECK(xc >= n.x_start);
    CHECK(xc <= n.x_end);

    // Correcting blends continuously from Expected to Finalized.
    NoteWindow fast = n;
    fast.t_end = n.t_start + (0.05 + 0.9 * u(rng)) * (n.t_expected - n.t_start);
    const double theta = n.t_start + u(rng) * (*fast.t_end - n.t_start);
    CHECK(map_time(fast, theta, *fast.t_end, MappingPhase::correcting(0.0)) ==
          doctest::Approx(map_time(n, theta, theta, MappingPhase::expected())).epsilon(1e-12));
    CHECK(map_time(fast, theta, *fast.t_end, MappingPhase::correcting(1.0)) ==
          doctest::Approx(map_time(fast, theta, *fast.t_end, MappingPhase::finalized())).epsilon(1e-12));
    CHECK(map_time(fast, *fast.t_end, *fast.t_end, MappingPhase::finalized()) == n.x_end);
  }
}

TEST_CASE("slope agrees with map_time") {
  NoteWindow n = unit_note();
  n.t_end = 1.0;
  const auto p = MappingPhase::correcting(0.3);
  const double slope = mapping_slope(n, 1.0, p);
  CHECK(map_time(n, 0.8, 1.0, p) == doctest::Approx(n.x_start + 0.8 * slope));
}

TEST_CASE("note tracker follows notes through a segment") {
  const auto script = one_segment_script();
  NoteTracker tracker(Voice::kViola, script, TempoModel{0.5});

  auto u = tracker.advance(0.0, 0.0);
  REQUIRE(u.head);
  CHECK(u.head->x == doctest::Approx(0.2));
  REQUIRE(u.mappings.size() == 1);
  CHECK(u.mappings[0].window.t_expected == doctest::Approx(0.5));
  CHECK(u.mappings[0].window.x_end == doctest::Approx(0.3));
  CHECK(u.mappings[0].segment == &script.segments(Voice::kViola)[0]);

  // On tempo: the note ends at its expected time and is final at once.
  u = tracker.advance(0.25, 0.5);
  CHECK(u.head->x == doctest::Approx(0.25));
  CHECK(u.mappings.empty());
  u = tracker.advance(0.5, 1.0);
  REQUIRE(u.mappings.size() == 2);
  CHECK(u.mappings[0].note_id == 0);
  CHECK(u.mappings[0].phase.kind == MappingPhase::Kind::kFinalized);
  CHECK(u.mappings[1].note_id == 1);
  CHECK(u.head->x == doctest::Approx(0.3));

  // Slow: compressing until the note ends.
  u = tracker.advance(1.2, 1.5);
  REQUIRE(u.mappings.size() == 1);
  CHECK(u.mappings[0].phase.kind == MappingPhase::Kind::kCompressing);
  CHECK(u.head->x == doctest::Approx(0.4));
  u = tracker.advance(1.5, 2.0);
  CHECK(tracker.tempo().seconds_per_beat == doctest::Approx(1.0));

  // Fast: correction runs for the animation time.
  u = tracker.advance(1.6, 3.0);
  REQUIRE_FALSE(u.mappings.empty());
  CHECK(u.mappings[0].note_id == 2);
  CHECK(u.mappings[0].phase.kind == MappingPhase::Kind::kCorrecting);
  u = tracker.advance(1.7, 3.2);
  CHECK(u.mappings[0].phase.kind == MappingPhase::Kind::kCorrecting);
  u = tracker.advance(1.9, 3.4);
  CHECK(u.mappings[0].phase.kind == MappingPhase::Kind::kFinalized);

  // Leaving the segment ends the last note and removes the head.
  u = tracker.advance(2.0, 5.0);
  CHECK_FALSE(u.head);
  CHECK(tracker.notes_started() == 4);
}
