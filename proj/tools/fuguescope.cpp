#include <atomic>
#include <csignal>
#include <iostream>

#include <CLI11.hpp>

#include "fuguescope/app/evaluate.hpp"
#include "fuguescope/app/run.hpp"
#include "fuguescope/error.hpp"

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop.store(true); }

}  // namespace

int main(int argc, char** argv) {
  using namespace fuguescope;

  CLI::App cli{"fuguescope: score-following pitch visualisation engine"};
  std::string mode = "file";
  std::vector<std::string> audio;
  std::string device = "default";
  std::string segments, tonal, beats, reference, record, replay, stretch;
  std::string bind;
  app::RunConfig config;
  bool no_serve = false;

  cli.add_option("--mode", mode, "live, file, evaluate or build-reference")->capture_default_str();
  cli.add_option("--audio", audio, "four mono WAV files (cello viola violin2 violin1) or one 4-channel WAV");
  cli.add_option("--device", device, "capture device id for live mode")->capture_default_str();
  cli.add_option("--segments", segments, "segment script (JSON)");
  cli.add_option("--tonal", tonal, "tonal script (JSON)");
  cli.add_option("--beats", beats, "beat annotations for the reference recording (JSON)");
  cli.add_option("--reference", reference, "reference cache, or a reference WAV together with --beats");
  cli.add_option("--bind", bind, "host:port (else FUGUESCOPE_BIND, else 127.0.0.1:8765)");
  cli.add_option("--tempo-seed", config.tempo_seed, "seconds per beat before the first note ends")
      ->capture_default_str();
  cli.add_flag("--paced,!--unpaced", config.paced, "pace file input in real time");
  cli.add_option("--sample-rate", config.sample_rate, "44100 or 48000")->capture_default_str();
  auto* stretch_opt = cli.add_option("--stretch", stretch, "comma-separated stretch factors for evaluate");
  cli.add_option("--record", record, "write the message stream to a log file");
  cli.add_option("--replay", replay, "serve a recorded log instead of running the engine");
  cli.add_option("--speed", config.speed, "replay pacing multiplier, 0 for unpaced")->capture_default_str();
  cli.add_flag("--stdout", config.to_stdout, "also write the message stream to stdout as NDJSON");
  cli.add_flag("--no-serve", no_serve, "do not open the WebSocket service");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    config.mode = app::parse_mode(mode);
    for (const auto& a : audio) config.audio.emplace_back(a);
    config.device = device;
    if (!segments.empty()) config.segments = segments;
    if (!tonal.empty()) config.tonal = tonal;
    if (!beats.empty()) config.beats = beats;
    if (!reference.empty()) config.reference = reference;
    if (!record.empty()) config.record = record;
    if (!replay.empty()) config.replay = replay;
    config.bind = bind;
    config.serve = !no_serve;
    config.stretch = stretch_opt->count() > 0 ? app::parse_factors(stretch) : app::kDefaultStretchFactors;
  } catch (const ConfigError& e) {
    std::cerr << "fuguescope: configuration error: " << e.what() << "\n";
    return 2;
  }

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  return app::run(config, std::cout, std::cerr, &g_stop);
}
