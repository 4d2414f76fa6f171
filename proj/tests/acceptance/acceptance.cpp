// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fuguescope/app/evaluate.hpp"
#include "fuguescope/app/run.hpp"
#include "fuguescope/error.hpp"
#include "fuguescope/follower/reference.hpp"
#include "fuguescope/layout/script.hpp"
#include "fuguescope/pitch/autocorrelation.hpp"
#include "fuguescope/pitch/pitch_tracker.hpp"
#include "fuguescope/service/message.hpp"
#include "fuguescope/service/recorder.hpp"
#include "fuguescope/timeline/mapping.hpp"
#include "fuguescope/tonal/tonal.hpp"
#include "fuguescope/tonal/tonal_script.hpp"
#include "synth.hpp"

using namespace fuguescope;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail = what;
      pass = false;
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// --- mapping equations ---------------------------------------------------

Outcome mapping_suite() {
  using timeline::MappingPhase;
  using timeline::map_time;
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t checks = 0;
  for (int w = 0; w < 10000; ++w) {
    timeline::NoteWindow n;
    n.t_start = 600.0 * u(rng);
    n.t_expected = n.t_start + 0.02 + 4.0 * u(rng);
    n.x_start = 0.95 * u(rng);
    n.x_end = n.x_start + 1e-4 + (1.0 - n.x_start - 1e-4) * u(rng);
    const double dur = n.t_expected - n.t_start;

    // (a) slow case: compression at t = t_next agrees with the final mapping.
    timeline::NoteWindow slow = n;
    slow.t_end = n.t_expected + 3.0 * u(rng) + 1e-6;
    for (int k = 0; k <= 8; ++k) {
      const double theta = std::lerp(n.t_start, *slow.t_end, k / 8.0);
      const double compress = map_time(n, theta, *slow.t_end, MappingPhase::compressing());
      const double final_x = map_time(slow, theta, *slow.t_end + 5.0 * u(rng), MappingPhase::finalized());
      o.require(std::abs(compress - final_x) <= 1e-9, "compression at t_next differs from the final mapping");
      ++checks;
    }

    // (b) Expected is invariant in t for fixed theta.
    for (int k = 0; k < 4; ++k) {
      const double theta = n.t_start + dur * u(rng);
      const double ta = theta + (n.t_expected - theta) * u(rng);
      const double tb = theta + (n.t_expected - theta) * u(rng);
      o.require(map_time(n, theta, ta, MappingPhase::expected()) == map_time(n, theta, tb, MappingPhase::expected()),
                "expected mapping moves with t");
      ++checks;
    }

    // (c) the head is pinned at x_next while compressing.
    for (int k = 0; k < 4; ++k) {
      const double t = n.t_expected + 5.0 * u(rng) + 1e-9;
      o.require(map_time(n, t, t, MappingPhase::compressing()) == n.x_end, "compressing head not pinned");
      ++checks;
    }

    // (d) correcting blend is monotone in theta for every progress value.
    timeline::NoteWindow fast = n;
    fast.t_end = n.t_start + dur * (0.02 + 0.96 * u(rng));
    for (int p = 0; p <= 10; ++p) {
      const auto phase = MappingPhase::correcting(p / 10.0);
      double prev = -1.0;
      for (int k = 0; k <= 16; ++k) {
        const double theta = std::lerp(n.t_start, *fast.t_end, k / 16.0);
        const double x = map_time(fast, theta, *fast.t_end, phase);
        o.require(x >= prev, "correcting blend not monotone in theta");
        prev = x;
        ++checks;
      }
    }
  }
  const double s = seconds_since(t0);
  o.require(s < 5.0, fmt("runtime %.2f s exceeds 5 s", s));
  if (o.pass) o.detail = std::to_string(checks) + " checks over 10000 windows in " + fmt("%.2f s", s);
  return o;
}

// --- autocorrelation oracle ----------------------------------------------

Outcome acf_oracle() {
  Outcome o;
  std::mt19937 rng(77);
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  const std::size_t n = 2205;  // 50 ms at 44.1 kHz
  pitch::Autocorrelator fast(n);
  std::vector<float> s(n);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const float scale = std::pow(10.0f, -3.0f * static_cast<float>(trial % 4) / 3.0f);
    for (auto& v : s) v = scale * u(rng);
    const auto r = fast(s);
    std::vector<double> direct(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      double acc = 0.0;
      for (std::size_t i = 0; i + k < n; ++i) acc += static_cast<double>(s[i]) * s[i + k];
      direct[k] = acc;
    }
    for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(r[k] - direct[k]) / direct[0]);
  }
  o.require(worst <= 1e-6, fmt("max relative error %.3g", worst));
  if (o.pass) o.detail = fmt("1000 frames, max |fft - direct| / acf[0] = %.3g", worst);
  return o;
}

// --- pitch accuracy ------------------------------------------------------

Outcome pitch_accuracy() {
  Outcome o;
  const auto t0 = Clock::now();
  const double sr = 44100.0;
  audio::AudioConfig framing;
  pitch::PitchTracker tracker({}, sr, framing.frame_samples());
  std::size_t voiced = 0, steady = 0, within = 0, octave = 0;
  for (auto timbre : {testing::Timbre::kSawtooth, testing::Timbre::kString}) {
    for (int midi = 33; midi <= 93; ++midi) {
      const double hz = testing::midi_to_hz(midi);
      const auto tone = timbre == testing::Timbre::kSawtooth ? testing::sawtooth(hz, 0.5, sr, 0.3)
                                                             : testing::string_tone(hz, 0.5, sr, 0.3);
      const std::size_t frames = framing.frame_count(tone.size());
      for (std::size_t k = 0; k < frames; ++k) {
        // Steady state: skip the first and last 100 ms (attack, release).
        const double start = framing.frame_start_time(k);
        if (start < 0.1 || start + framing.frame_length > 0.4) continue;
        ++steady;
        const auto p = tracker.track(Voice::kViola, k,
                                     std::span<const float>(tone.data() + framing.frame_start_sample(k),
                                                            framing.frame_samples()));
        if (!p.voiced()) continue;
        ++voiced;
        const double c = 1200.0 * std::log2(*p.f0 / hz);
        if (std::abs(c) <= 50.0) ++within;
        if (std::abs(c) >= 600.0) ++octave;
      }
    }
  }
  const double s = seconds_since(t0);
  const double acc = voiced ? double(within) / double(voiced) : 0.0;
  const double oct = voiced ? double(octave) / double(voiced) : 1.0;
  o.require(voiced > steady / 2, "fewer than half of the steady frames are voiced");
  o.require(acc >= 0.90, fmt("only %.1f%% within 50 cents", 100.0 * acc));
  o.require(oct < 0.10, fmt("%.1f%% octave errors", 100.0 * oct));
  o.require(s < 30.0, fmt("runtime %.1f s exceeds 30 s", s));
  if (o.pass) {
    std::ostringstream d;
    d << voiced << "/" << steady << " steady frames voiced, " << fmt("%.2f%%", 100.0 * acc)
      << " within 50 cents, " << fmt("%.2f%%", 100.0 * oct) << " octave errors, " << fmt("%.1f s", s);
    o.detail = d.str();
  }
  return o;
}

// --- score follower ------------------------------------------------------

Outcome follower_accuracy(const testing::FixturePaths& paths) {
  Outcome o;
  const auto t0 = Clock::now();
  // 24 s keeps the x2 input under 2000 frames for the full DTW oracle.
  auto reference = follower::build_reference(paths.reference, paths.beats, audio::AudioConfig{});
  const std::size_t keep = 960;
  reference.data.resize(keep * reference.dims);
  std::vector<double> times, beats;
  for (std::size_t i = 0; i < reference.beats.size(); ++i) {
    if (reference.beats.times()[i] <= (keep - 1) * reference.hop) {
      times.push_back(reference.beats.times()[i]);
      beats.push_back(reference.beats.beats()[i]);
    }
  }
  reference.beats = follower::BeatTable(times, beats);

  const auto self = app::evaluate_stretch(reference, 1.0, {}, false);
  std::size_t max_dev = 0;
  for (std::size_t t = 0; t < self.oltw_frames.size(); ++t) {
    const std::size_t f = self.oltw_frames[t];
    max_dev = std::max(max_dev, f > t ? f - t : t - f);
  }
  o.require(max_dev <= 1, "self-alignment deviates by " + std::to_string(max_dev) + " frames");

  std::ostringstream d;
  d << "self max dev " << max_dev << " frame(s);";
  for (double factor : app::kDefaultStretchFactors) {
    const auto r = app::evaluate_stretch(reference, factor);
    o.require(r.input_frames <= 2000, "sequence longer than 2000 frames");
    o.require(r.mean_error_ms <= 100.0, fmt("x%.2f mean error", factor) + fmt(" %.1f ms", r.mean_error_ms));
    o.require(r.max_error_ms <= 250.0, fmt("x%.2f max error", factor) + fmt(" %.1f ms", r.max_error_ms));
    o.require(r.dtw_mean_frames >= 0.0 && r.dtw_mean_frames <= 5.0,
              fmt("x%.2f OLTW vs DTW", factor) + fmt(" %.2f frames", r.dtw_mean_frames));
    d << fmt(" x%.2f:", factor) << fmt(" mean %.1f", r.mean_error_ms) << fmt("/max %.0f ms", r.max_error_ms)
      << fmt(" dtw %.2f", r.dtw_mean_frames) << ";";
  }
  const double s = seconds_since(t0);
  o.require(s < 120.0, fmt("runtime %.1f s exceeds 2 min", s));
  d << fmt(" %.1f s", s);
  if (o.pass) o.detail = d.str();
  return o;
}

// --- determinism ---------------------------------------------------------

Outcome determinism(const testing::FixturePaths& paths) {
  Outcome o;
  auto file_run = [&](const std::filesystem::path& log) {
    app::RunConfig cfg;
    cfg.mode = app::Mode::kFile;
    cfg.audio = {paths.quartet};
    cfg.segments = paths.segments;
    cfg.tonal = paths.tonal;
    cfg.reference = paths.reference;
    cfg.beats = paths.beats;
    cfg.serve = false;
    cfg.record = log;
    std::ostringstream out, err;
    const int code = app::run(cfg, out, err);
    if (code != 0) std::cerr << err.str();
    return code;
  };
  o.require(file_run(paths.dir / "run1.ndjson") == 0, "first run failed");
  o.require(file_run(paths.dir / "run2.ndjson") == 0, "second run failed");
  if (!o.pass) return o;
  const auto a = service::read_log(paths.dir / "run1.ndjson");
  const auto b = service::read_log(paths.dir / "run2.ndjson");
  o.require(a.messages.size() == b.messages.size(), "runs differ in message count");
  for (std::size_t i = 0; o.pass && i < a.messages.size(); ++i) {
    o.require(service::same_content(a.messages[i], b.messages[i]), "runs differ at message " + std::to_string(i));
  }
  o.require(a.config == b.config, "run headers differ");

  app::RunConfig rc;
  rc.replay = paths.dir / "run1.ndjson";
  rc.speed = 0.0;
  rc.serve = false;
  rc.to_stdout = true;
  std::ostringstream out, err;
  o.require(app::run(rc, out, err) == 0, "replay failed");
  std::istringstream lines(out.str());
  std::string line;
  std::size_t n = 0;
  while (std::getline(lines, line)) {
    if (n >= a.messages.size()) {
      o.require(false, "replay emitted extra messages");
      break;
    }
    o.require(service::same_content(service::decode(line), a.messages[n]),
              "replay differs at message " + std::to_string(n));
    ++n;
  }
  o.require(n == a.messages.size(), "replay emitted " + std::to_string(n) + " messages");
  const auto& last = a.messages.back();
  o.require(last.kind == service::MessageKind::kClock && last.data.value("final", false), "stream does not end with the final clock");
  if (o.pass) {
    o.detail = std::to_string(a.messages.size()) + " messages identical across two runs and replay; final clock at beat " +
               fmt("%g", last.beats);
  }
  return o;
}

// --- script validation ---------------------------------------------------

Outcome script_validation(const std::filesystem::path& dir) {
  Outcome o;
  auto expect = [&](const std::string& name, const json& doc, bool tonal_file,
                    const std::vector<std::string>& fragments) {
    const auto path = dir / name;
    testing::write_json(path, doc);
    std::string message;
    try {
      if (tonal_file) {
        tonal::load_tonal_script(path);
      } else {
        layout::load_script(path);
      }
    } catch (const ConfigError& e) {
      message = e.what();
    }
    o.require(!message.empty(), name + " was accepted");
    if (message.empty()) return;
    o.require(message.find(path.string()) != std::string::npos, name + ": diagnostic lacks the path");
    for (const auto& f : fragments) {
      o.require(message.find(f) != std::string::npos, name + ": diagnostic lacks '" + f + "': " + message);
    }
  };
  auto seg = [](const char* voice, double t1, double t2, double x1) {
    return json{{"voice", voice}, {"t1", t1}, {"t2", t2}, {"x1", x1}, {"paradigm_id", "A"}};
  };
  auto segdoc = [](json segments) {
    return json{{"pixels_per_beat", 0.02}, {"octave_height", 0.15}, {"segments", segments}};
  };
  expect("overlap.json", segdoc({seg("cello", 0, 8, 0.1), seg("viola", 0, 8, 0.1), seg("cello", 6, 10, 0.4)}), false,
         {"segments[2]", "overlaps segments[0]", "cello", "[6, 10)", "[0, 8)"});
  expect("ordering.json", segdoc({seg("viola", 0, 4, 0.1), seg("viola", 9, 7, 0.3)}), false,
         {"segments[1]", "triplet ordering", "t2 (7)", "t1 (9)"});
  expect("out_of_order.json", segdoc({seg("violin1", 8, 12, 0.1), seg("violin1", 0, 4, 0.3)}), false,
         {"segments[1]", "out of order"});

  auto chord = [](double start, double end, int root, bool desc5) {
    return json{{"start", start}, {"end", end}, {"root", root}, {"desc5", desc5}};
  };
  expect("desc5_false_flag.json", json{{"chords", {chord(0, 4, 9, false), chord(4, 8, 4, true)}}}, true,
         {"chords[1]", "desc5 flag set", "E (4)", "A (9)", "expected D (2)"});
  expect("desc5_missing_flag.json", json{{"chords", {chord(0, 4, 9, false), chord(4, 8, 2, false)}}}, true,
         {"chords[1]", "descends a fifth", "desc5 is not set"});
  expect("desc5_first.json", json{{"chords", {chord(0, 4, 2, true)}}}, true, {"chords[0]", "first chord"});
  expect("chord_overlap.json", json{{"chords", {chord(0, 4, 2, false), chord(3, 6, 4, false)}}}, true,
         {"chords[1]", "overlaps chords[0]"});
  if (o.pass) o.detail = "7 crafted files rejected with path, entry and cause";
  return o;
}

// --- tonal state ---------------------------------------------------------

Outcome tonal_probes() {
  Outcome o;
  const auto script = tonal::parse_tonal_script(json{
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

  using Set = std::vector<int>;
  const Set none;
  const Set dm = {2, 5, 9};
  const Set a7 = {1, 4, 9};
  const Set a7_seventh = {4, 7, 9};
  struct Probe {
    double beat;
    Set lit;
    Set main;
    Set seventh;
  };
  // Hand-computed: D, A, F enter and stay; C#, E, G live until the A7
  // ends at 8; B sounds after the last chord and never expires.
  const std::vector<Probe> probes = {
      {-1.0, {}, none, none},
      {0.0, {62}, dm, none},
      {0.5, {62}, dm, none},
      {1.0, {62, 69}, dm, none},
      {1.5, {62, 69}, dm, none},
      {2.0, {62, 65, 69}, dm, none},
      {3.99, {62, 65, 69}, dm, none},
      {4.0, {62, 65, 69}, a7, a7_seventh},
      {4.5, {61, 62, 65, 69}, a7, a7_seventh},
      {4.99, {61, 62, 65, 69}, a7, a7_seventh},
      {5.0, {61, 62, 64, 65, 69}, a7, a7_seventh},
      {5.5, {61, 62, 64, 65, 69}, a7, a7_seventh},
      {6.0, {61, 62, 64, 65, 67, 69}, a7, a7_seventh},
      {7.99, {61, 62, 64, 65, 67, 69}, a7, a7_seventh},
      {8.0, {62, 65, 69, 74}, dm, none},
      {10.0, {62, 65, 69, 74}, dm, none},
      {11.99, {62, 65, 69, 74}, dm, none},
      {12.0, {62, 65, 69, 74}, none, none},
      {13.0, {62, 65, 69, 71, 74}, none, none},
      {20.0, {62, 65, 69, 71, 74}, none, none},
  };
  auto sorted = [](const std::array<tonal::PitchClass, 3>& v) {
    Set s;
    for (auto pc : v) s.push_back(pc.value());
    std::sort(s.begin(), s.end());
    return s;
  };
  for (const auto& p : probes) {
    const std::string at = fmt("beat %g", p.beat);
    o.require(tonal::lit_lines(script, p.beat) == p.lit, at + ": lit lines differ");
    const tonal::Chord* c = tonal::current_chord(script, p.beat);
    Set main, seventh;
    if (c) {
      const auto shape = tonal::triangle_of(*c);
      main = sorted(shape.main.vertices);
      if (shape.seventh) seventh = sorted(shape.seventh->vertices);
    }
    o.require(main == p.main, at + ": main triangle differs");
    o.require(seventh == p.seventh, at + ": seventh triangle differs");
  }

  const auto r = tonal::fifth_transition(script.chords[1], script.chords[2]);
  o.require(r.held.size() == 1 && r.held[0].value() == 9, "A7->Dm: held tones differ from {A}");
  o.require(r.moves.size() == 2, "A7->Dm: expected two voice-leading arrows");
  if (r.moves.size() == 2) {
    o.require(r.moves[0].from.value() == 1 && r.moves[0].to.value() == 2 && r.moves[0].semitones == 1,
              "A7->Dm: C# -> D +1 missing");
    o.require(r.moves[1].from.value() == 7 && r.moves[1].to.value() == 5 && r.moves[1].semitones == -2 &&
                  r.moves[1].label == "seventh down",
              "A7->Dm: G -> F -2 'seventh down' missing");
  }
  o.require(r.angle_degrees == 150.0, "A7->Dm: rotation angle not 150 degrees");
  o.require(r.emphasis_token == std::string(tonal::kCadenceToken), "A7->Dm: cadence token missing");
  if (o.pass) o.detail = "20 probes (lit lines, triangles) and the A7->Dm rotation match";
  return o;
}

}  // namespace

int main() {
  const auto dir = testing::scratch_dir("acceptance");
  const auto paths = testing::write_fixtures(dir, 44100.0, 30.0);

  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"mapping equations", mapping_suite},
      {"autocorrelation oracle", acf_oracle},
      {"pitch accuracy", pitch_accuracy},
      {"follower alignment", [&] { return follower_accuracy(paths); }},
      {"determinism", [&] { return determinism(paths); }},
      {"script validation", [&] { return script_validation(dir); }},
      {"tonal state", tonal_probes},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << c.name << ": " << o.detail << std::endl;
  }
  std::filesystem::remove_all(dir);
  return failures == 0 ? 0 : 1;
}
