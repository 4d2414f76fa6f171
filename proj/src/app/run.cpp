#include "fuguescope/app/run.hpp"

#include <chrono>
#include <iostream>
#include <memory>
#include <mutex>
#include <thread>

#include "fuguescope/app/evaluate.hpp"
#include "fuguescope/audio/frame_source.hpp"
#include "fuguescope/audio/mixdown.hpp"
#include "fuguescope/audio/wav.hpp"
#include "fuguescope/engine/engine.hpp"
#include "fuguescope/error.hpp"
#include "fuguescope/follower/reference.hpp"
#include "fuguescope/layout/script.hpp"
#include "fuguescope/service/broadcaster.hpp"
#include "fuguescope/service/recorder.hpp"
#include "fuguescope/service/server.hpp"
#include "fuguescope/tonal/tonal_script.hpp"

namespace fuguescope::app {
namespace {

audio::AudioConfig framing_of(const RunConfig& config) {
  audio::AudioConfig a;
  a.sample_rate = config.sample_rate;
  a.paced = config.paced;
  if (config.mode == Mode::kLive) {
    a.source = audio::LiveDevice{config.device};
  } else if (config.audio.size() == 4) {
    a.source = audio::FourMonoFiles{{config.audio[0], config.audio[1], config.audio[2], config.audio[3]}};
  } else if (config.audio.size() == 1) {
    a.source = audio::MultiChannelFile{config.audio[0]};
  }
  return a;
}

follower::ReferenceIndex obtain_reference(const RunConfig& config, const audio::AudioConfig& framing) {
  const auto& path = *config.reference;
  if (path.extension() == ".wav") {
    if (!config.beats) throw ConfigError("--beats is required to build a reference from " + path.string());
    return follower::build_reference(path, *config.beats, framing);
  }
  return follower::load_reference(path);
}

// Mono performance from a pre-stretched recording (mono or 4 channels).
std::vector<float> load_mono(const std::filesystem::path& path, double sample_rate) {
  const audio::WavData wav = audio::read_wav(path);
  if (wav.sample_rate != sample_rate) {
    throw ConfigError(path.string() + ": sample rate " + std::to_string(wav.sample_rate) +
                      " does not match the configured " + std::to_string(sample_rate));
  }
  if (wav.channels.size() == 1) return wav.channels[0];
  if (wav.channels.size() != 4) throw ConfigError(path.string() + ": expected 1 or 4 channels");
  std::vector<float> mono(wav.length());
  for (std::size_t n = 0; n < mono.size(); ++n) {
    double s = 0.0;
    for (const auto& ch : wav.channels) s += ch[n];
    mono[n] = static_cast<float>(s / 4.0);
  }
  return mono;
}

int run_build_reference(const RunConfig& config, std::ostream& out) {
  const audio::AudioConfig framing = framing_of(config);
  const auto index = follower::build_reference(config.audio[0], *config.beats, framing);
  follower::save_reference(*config.reference, index);
  out << "reference: " << index.size() << " frames, " << index.dims << " dims, beats "
      << index.beats.first_beat() << ".." << index.beats.last_beat() << " -> "
      << config.reference->string() << "\n";
  return 0;
}

int run_evaluate(const RunConfig& config, std::ostream& out) {
  audio::AudioConfig framing = framing_of(config);
  const auto reference = obtain_reference(config, framing);
  nlohmann::json report = nlohmann::json::array();
  if (!config.audio.empty()) {
    if (config.audio.size() != config.stretch.size()) {
      throw ConfigError("evaluate: give one --stretch factor per pre-stretched --audio file");
    }
    for (std::size_t i = 0; i < config.audio.size(); ++i) {
      const auto mono = load_mono(config.audio[i], config.sample_rate);
      follower::FeatureExtractor extract(framing.sample_rate, framing.frame_samples());
      follower::FeatureSequence seq;
      seq.dims = extract.dims();
      const std::size_t frames = framing.frame_count(mono.size());
      for (std::size_t k = 0; k < frames; ++k) {
        const std::size_t start = framing.frame_start_sample(k);
        const auto f = extract(std::span<const float>(mono.data() + start, framing.frame_samples()));
        seq.data.insert(seq.data.end(), f.begin(), f.end());
      }
      report.push_back(to_json(evaluate_sequence(reference, seq, config.stretch[i])));
    }
  } else {
    for (double factor : config.stretch) report.push_back(to_json(evaluate_stretch(reference, factor)));
  }
  out << nlohmann::json{{"results", report}}.dump(2) << "\n";
  return 0;
}

int run_replay(const RunConfig& config, std::ostream& out, std::ostream& err, const std::atomic<bool>* stop) {
  const service::MessageLog log = service::read_log(*config.replay);
  service::Broadcaster broadcaster;
  broadcaster.set_config(log.config);
  std::unique_ptr<service::Server> server;
  if (config.serve) {
    server = std::make_unique<service::Server>(broadcaster, [](service::ControlCommand cmd, service::Reply reply) {
      reply(service::make_nack(cmd.request_id, "replay sessions accept no commands"));
    });
    server->start(service::parse_bind(service::resolve_bind(config.bind)));
  }
  if (config.to_stdout) {
    broadcaster.add_sink([&out](const std::vector<service::DrawMessage>& batch) { out << service::to_ndjson(batch); });
  }
  struct Stopped {};
  try {
    service::replay(log, config.speed, [&](const service::DrawMessage& m) {
      if (stop && stop->load()) throw Stopped{};
      broadcaster.relay({m});
    });
  } catch (const Stopped&) {
  }
  if (log.truncated) err << "fuguescope: log ends with an incomplete line; stopped at the last complete message\n";
  broadcaster.close_all();
  if (server) server->stop();
  out.flush();
  return 0;
}

int run_engine(const RunConfig& config, std::ostream& out, std::ostream& err, const std::atomic<bool>* stop) {
  const layout::ParadigmaticScript segments = layout::load_script(*config.segments);
  for (const auto& w : segments.warnings) err << "fuguescope: " << w << "\n";
  const tonal::TonalScript tonal = tonal::load_tonal_script(*config.tonal);

  engine::EngineConfig ecfg;
  ecfg.audio = framing_of(config);
  ecfg.tempo_seed = config.tempo_seed;
  ecfg.validate();
  const follower::ReferenceIndex reference = obtain_reference(config, ecfg.audio);
  engine::Engine engine(ecfg, reference, segments, tonal);

  service::Broadcaster broadcaster;
  nlohmann::json header = engine.describe();
  header["mode"] = to_string(config.mode);
  broadcaster.set_config(header);

  std::unique_ptr<service::Recorder> recorder;
  if (config.record) {
    recorder = std::make_unique<service::Recorder>(*config.record, header);
    broadcaster.add_sink([r = recorder.get()](const std::vector<service::DrawMessage>& b) { r->write(b); });
  }
  if (config.to_stdout) {
    broadcaster.add_sink([&out](const std::vector<service::DrawMessage>& b) { out << service::to_ndjson(b); });
  }

  // Audio opens before the service so a missing device fails fast.
  auto stream = std::make_unique<audio::FrameStream>(audio::open_source(ecfg.audio));

  std::unique_ptr<service::Server> server;
  if (config.serve) {
    server = std::make_unique<service::Server>(
        broadcaster, [&engine](service::ControlCommand cmd, service::Reply reply) {
          engine.commands().push(std::move(cmd), std::move(reply));
        });
    server->start(service::parse_bind(service::resolve_bind(config.bind)));
    err << "fuguescope: serving on port " << server->port() << "\n";
  }

  auto deliver = [&](engine::FrameOutput&& o) {
    broadcaster.publish(o.messages);
    for (auto& [reply, body] : o.replies) {
      if (reply) reply(body);
    }
  };

  while (!(stop && stop->load())) {
    if (engine.paused()) {
      deliver(engine.poll_commands());
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
      continue;
    }
    auto frame = stream->next();
    if (!frame) break;
    deliver(engine.process(*frame));
    if (engine.exhausted()) break;
  }
  deliver(engine.finish());

  // Shutdown order: audio first, service last.
  stream->stop();
  stream.reset();
  broadcaster.close_all();
  if (server) server->stop();
  if (recorder) recorder->flush();
  out.flush();
  return 0;
}

}  // namespace

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::kLive: return "live";
    case Mode::kFile: return "file";
    case Mode::kEvaluate: return "evaluate";
    case Mode::kBuildReference: return "build-reference";
  }
  return "file";
}

Mode parse_mode(std::string_view name) {
  if (name == "live") return Mode::kLive;
  if (name == "file") return Mode::kFile;
  if (name == "evaluate") return Mode::kEvaluate;
  if (name == "build-reference") return Mode::kBuildReference;
  throw ConfigError("unknown mode '" + std::string(name) + "' (live, file, evaluate, build-reference)");
}

void RunConfig::validate() const {
  if (replay) return;
  auto need = [&](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string(to_string(mode)) + " mode requires " + what);
  };
  switch (mode) {
    case Mode::kBuildReference:
      need(audio.size() == 1, "exactly one --audio reference recording");
      need(beats.has_value(), "--beats");
      need(reference.has_value(), "--reference (output cache path)");
      break;
    case Mode::kFile:
      need(audio.size() == 1 || audio.size() == 4, "--audio with one 4-channel file or four mono files");
      [[fallthrough]];
    case Mode::kLive:
      need(segments.has_value(), "--segments");
      need(tonal.has_value(), "--tonal");
      need(reference.has_value(), "--reference");
      break;
    case Mode::kEvaluate:
      need(reference.has_value(), "--reference");
      break;
  }
  if (!(tempo_seed > 0.0)) throw ConfigError("--tempo-seed must be positive");
  for (double f : stretch) {
    if (!(f > 0.0)) throw ConfigError("stretch factors must be positive");
  }
}

std::vector<double> parse_factors(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    const std::string item(text.substr(pos, comma - pos));
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("invalid stretch factor '" + item + "'");
    }
    pos = comma + 1;
  }
  return out;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err, const std::atomic<bool>* stop) {
  try {
    config.validate();
    if (config.replay) return run_replay(config, out, err, stop);
    switch (config.mode) {
      case Mode::kBuildReference: return run_build_reference(config, out);
      case Mode::kEvaluate: return run_evaluate(config, out);
      case Mode::kFile:
      case Mode::kLive: return run_engine(config, out, err, stop);
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "fuguescope: configuration error: " << e.what() << "\n";
    return 2;
  } catch (const RuntimeError& e) {
    err << "fuguescope: runtime error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "fuguescope: runtime error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace fuguescope::app
