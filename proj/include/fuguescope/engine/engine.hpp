#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "fuguescope/audio/audio_config.hpp"
#include "fuguescope/audio/frames.hpp"
#include "fuguescope/audio/mixdown.hpp"
#include "fuguescope/follower/features.hpp"
#include "fuguescope/follower/oltw.hpp"
#include "fuguescope/layout/cues.hpp"
#include "fuguescope/layout/layout.hpp"
#include "fuguescope/pitch/pitch_tracker.hpp"
#include "fuguescope/service/command.hpp"
#include "fuguescope/service/message.hpp"
#include "fuguescope/timeline/note_tracker.hpp"
#include "fuguescope/tonal/tonal.hpp"

namespace fuguescope::engine {

struct EngineConfig {
  audio::AudioConfig audio;
  pitch::TrackerConfig tracker;
  follower::FeatureConfig features;
  follower::FollowerConfig follower;
  layout::StrokeParams stroke;
  tonal::Palette palette;
  double tempo_seed = 0.5;  // seconds per beat before the first note ends
  double anim_seconds = timeline::kDefaultAnimSeconds;
  double rotation_seconds = 0.6;
  double a4_hz = 440.0;

  // Throws ConfigError.
  void validate() const;
};

// Messages for one frame plus the command replies to send once they are
// published.
struct FrameOutput {
  std::vector<service::DrawMessage> messages;
  std::vector<std::pair<service::Reply, nlohmann::json>> replies;
};

// Single-owner per-frame pipeline: commands, mixdown, features, follower,
// pitch per voice, then timeline, layout, tonal and cue messages.
class Engine {
 public:
  using WallClock = std::function<double()>;

  // The reference and scripts must outlive the engine.
  Engine(EngineConfig config, const follower::ReferenceIndex& reference,
         const layout::ParadigmaticScript& segments, const tonal::TonalScript& tonal,
         WallClock wall_clock = {});

  // Applies queued commands, then analyses the frame unless paused.
  FrameOutput process(const audio::MultiChannelFrame& frame);
  // Applies queued commands only (used while paused).
  FrameOutput poll_commands();
  // Closing messages: the clock pinned to the final beat.
  FrameOutput finish();

  service::CommandQueue& commands() { return commands_; }
  bool paused() const { return paused_; }
  bool exhausted() const { return exhausted_; }
  double beats() const { return beats_; }
  const audio::Gains& gains() const { return gains_; }
  double a4_hz() const { return config_.a4_hz; }
  const EngineConfig& config() const { return config_; }
  const follower::OnlineFollower& follower() const { return follower_; }

  // Run-wide constants for the log header and late-join snapshots.
  nlohmann::json describe() const;

 private:
  void apply(service::CommandQueue::Entry& entry, FrameOutput& out);
  void apply_param(const service::SetParam& p);
  void emit(FrameOutput& out, service::MessageKind kind, nlohmann::json data);
  void tonal_messages(FrameOutput& out, bool force);
  void cue_messages(FrameOutput& out, double from, double to);
  nlohmann::json cue_state_json(const layout::CueState& s) const;
  nlohmann::json segment_state_json(const timeline::NoteMapping& m) const;

  EngineConfig config_;
  const follower::ReferenceIndex* reference_;
  const layout::ParadigmaticScript* segments_;
  const tonal::TonalScript* tonal_;
  WallClock wall_clock_;

  follower::FeatureExtractor features_;
  follower::OnlineFollower follower_;
  pitch::PitchTracker pitch_;
  std::vector<timeline::NoteTracker> notes_;
  service::CommandQueue commands_;

  audio::Gains gains_ = audio::kUnitGains;
  bool paused_ = false;
  bool exhausted_ = false;
  bool started_ = false;
  double beats_ = 0.0;
  double t_ = 0.0;
  std::optional<std::size_t> chord_;
  bool chord_known_ = false;
  std::map<int, std::string> lit_;  // midi -> color
  std::optional<layout::CueState> last_cue_state_;
};

}  // namespace fuguescope::engine
