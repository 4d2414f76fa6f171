#include "fuguescope/engine/engine.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fuguescope/error.hpp"

namespace fuguescope::engine {
namespace {

using service::MessageKind;

std::string_view phase_name(timeline::MappingPhase::Kind k) {
  switch (k) {
    case timeline::MappingPhase::Kind::kExpected: return "expected";
    case timeline::MappingPhase::Kind::kCompressing: return "compressing";
    case timeline::MappingPhase::Kind::kCorrecting: return "correcting";
    case timeline::MappingPhase::Kind::kFinalized: return "finalized";
  }
  return "expected";
}

nlohmann::json points_json(const tonal::Triangle& t) {
  nlohmann::json pcs = nlohmann::json::array();
  nlohmann::json pts = nlohmann::json::array();
  for (std::size_t i = 0; i < 3; ++i) {
    pcs.push_back(t.vertices[i].value());
    pts.push_back({t.points[i].first, t.points[i].second});
  }
  return {{"vertices", pcs}, {"points", pts}};
}

double midi_to_hz(int midi, double a4) { return a4 * std::exp2((midi - 69) / 12.0); }

}  // namespace

void EngineConfig::validate() const {
  audio.validate();
  tracker.validate(audio.sample_rate);
  stroke.validate();
  if (!(tempo_seed > 0.0)) throw ConfigError("tempo seed must be positive seconds per beat");
  if (!(anim_seconds >= 0.0)) throw ConfigError("animation time must be non-negative");
  if (!(a4_hz > 0.0)) throw ConfigError("tuning must be positive");
}

Engine::Engine(EngineConfig config, const follower::ReferenceIndex& reference,
               const layout::ParadigmaticScript& segments, const tonal::TonalScript& tonal,
               WallClock wall_clock)
    : config_(std::move(config)),
      reference_(&reference),
      segments_(&segments),
      tonal_(&tonal),
      wall_clock_(std::move(wall_clock)),
      features_(config_.audio.sample_rate, config_.audio.frame_samples(), config_.features),
      follower_(reference, config_.follower),
      pitch_(config_.tracker, config_.audio.sample_rate, config_.audio.frame_samples()) {
  config_.validate();
  if (reference.dims != features_.dims()) {
    throw ConfigError("reference feature dimension " + std::to_string(reference.dims) +
                      " does not match the configured " + std::to_string(features_.dims()));
  }
  if (std::abs(reference.hop - config_.audio.hop) > 1e-9) {
    throw ConfigError("reference hop does not match the configured hop");
  }
  if (!wall_clock_) {
    const auto start = std::chrono::steady_clock::now();
    wall_clock_ = [start] {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
  }
  for (Voice v : kAllVoices) {
    notes_.emplace_back(v, segments, timeline::TempoModel{config_.tempo_seed}, config_.anim_seconds);
  }
  beats_ = std::max(0.0, reference.beats.beats_at(0.0));
}

void Engine::emit(FrameOutput& out, MessageKind kind, nlohmann::json data) {
  service::DrawMessage m;
  m.kind = kind;
  m.beats = beats_;
  m.wall_time = wall_clock_();
  m.data = std::move(data);
  out.messages.push_back(std::move(m));
}

void Engine::apply_param(const service::SetParam& p) {
  EngineConfig next = config_;
  const std::string& k = p.path;
  if (k == "stroke.w_min") next.stroke.w_min = p.value;
  else if (k == "stroke.w_max") next.stroke.w_max = p.value;
  else if (k == "stroke.gamma") next.stroke.gamma = p.value;
  else if (k == "stroke.tau") next.stroke.tau = p.value;
  else if (k == "stroke.r_floor") next.stroke.r_floor = p.value;
  else if (k == "tracker.voicing_threshold") next.tracker.voicing_threshold = p.value;
  else if (k == "tracker.amplitude_floor") next.tracker.amplitude_floor = p.value;
  else if (k == "tracker.f_min") next.tracker.f_min = p.value;
  else if (k == "tracker.f_max") next.tracker.f_max = p.value;
  else if (k == "tonal.rotation_seconds") next.rotation_seconds = p.value;
  else throw std::invalid_argument("unknown parameter '" + k + "'");
  try {
    next.validate();
  } catch (const ConfigError& e) {
    throw std::invalid_argument(e.what());
  }
  if (!(next.rotation_seconds >= 0.0)) throw std::invalid_argument("rotation time must be non-negative");
  config_ = next;
  pitch_.set_config(config_.tracker);
}

void Engine::apply(service::CommandQueue::Entry& entry, FrameOutput& out) {
  const auto& cmd = entry.command;
  const std::string name(service::command_name(cmd.body));
  try {
    if (auto* g = std::get_if<service::SetGain>(&cmd.body)) {
      gains_[index_of(g->voice)] = g->value;
    } else if (auto* p = std::get_if<service::SetPosition>(&cmd.body)) {
      const double from = beats_;
      follower_.override_position(p->beats);
      beats_ = std::max(0.0, p->beats);
      exhausted_ = false;
      emit(out, MessageKind::kOverrideMarker,
           {{"from_beats", from}, {"to_beats", beats_}, {"request_id", cmd.request_id}});
      const layout::CueState state = layout::apply_cues(*segments_, beats_);
      emit(out, MessageKind::kCue, {{"action", "resync"}, {"state", cue_state_json(state)}});
      last_cue_state_ = state;
    } else if (auto* t = std::get_if<service::SetTuning>(&cmd.body)) {
      config_.a4_hz = t->a4_hz;
    } else if (std::holds_alternative<service::Pause>(cmd.body)) {
      paused_ = true;
    } else if (std::holds_alternative<service::Resume>(cmd.body)) {
      paused_ = false;
    } else if (auto* s = std::get_if<service::SetParam>(&cmd.body)) {
      apply_param(*s);
    }
  } catch (const std::exception& e) {
    out.replies.emplace_back(entry.reply, service::make_nack(cmd.request_id, e.what()));
    return;
  }
  out.replies.emplace_back(entry.reply, service::make_ack(cmd.request_id, name));
}

FrameOutput Engine::poll_commands() {
  FrameOutput out;
  for (auto& e : commands_.drain()) apply(e, out);
  return out;
}

nlohmann::json Engine::cue_state_json(const layout::CueState& s) const {
  nlohmann::json groups = nlohmann::json::object();
  for (const auto& [g, o] : s.group_opacity) groups[g] = o;
  return {{"groups", groups},
          {"global", s.global_opacity},
          {"terminal", s.terminal},
          {"letters_visible", s.letters.has_value()}};
}

nlohmann::json Engine::segment_state_json(const timeline::NoteMapping& m) const {
  const layout::Segment& seg = *m.segment;
  nlohmann::json j{{"voice", to_string(m.voice)},
                   {"segment", seg.id},
                   {"paradigm_id", seg.paradigm_id},
                   {"fade_group", seg.fade_group ? nlohmann::json(*seg.fade_group) : nlohmann::json(nullptr)},
                   {"emphasis", layout::to_string(seg.emphasis)},
                   {"inverted", seg.inverted},
                   {"note", m.note_id},
                   {"phase", phase_name(m.phase.kind)},
                   {"progress", m.phase.progress},
                   {"t_start", m.window.t_start},
                   {"t_expected", m.window.t_expected},
                   {"t_end", m.window.t_end ? nlohmann::json(*m.window.t_end) : nlohmann::json(nullptr)},
                   {"x_start", m.window.x_start},
                   {"x_end", m.window.x_end},
                   {"slope", m.slope}};
  return j;
}

void Engine::cue_messages(FrameOutput& out, double from, double to) {
  for (std::size_t i : layout::cues_crossed(*segments_, from, to)) {
    const layout::Cue& cue = segments_->cues[i];
    emit(out, MessageKind::kCue,
         {{"index", i}, {"action", layout::to_string(cue.action)}, {"target", cue.target},
          {"beat", cue.beat}, {"span", cue.span}});
    if (cue.action == layout::CueAction::kLetters) {
      const layout::CueState state = layout::apply_cues(*segments_, cue.beat);
      if (state.letters) {
        nlohmann::json letters = nlohmann::json::array();
        nlohmann::json pcs = nlohmann::json::array();
        for (auto l : layout::kBachLetters) letters.push_back(l);
        for (int pc : layout::kBachPitchClasses) pcs.push_back(pc);
        emit(out, MessageKind::kLetters,
             {{"letters", letters}, {"pitch_classes", pcs}, {"voice", to_string(state.letters->voice)},
              {"segment", state.letters->segment_id}, {"x", state.letters->x}, {"beat", state.letters->beat}});
      }
    }
  }
}

void Engine::tonal_messages(FrameOutput& out, bool force) {
  const auto idx = tonal::current_chord_index(*tonal_, beats_);
  const tonal::Chord* chord = idx ? &tonal_->chords[*idx] : nullptr;

  if (force || idx != chord_) {
    if (idx && chord_ && *idx == *chord_ + 1 && chord->descending_fifth_from_prev) {
      const auto spec = tonal::fifth_transition(tonal_->chords[*chord_], *chord, {}, config_.rotation_seconds);
      nlohmann::json held = nlohmann::json::array();
      for (auto pc : spec.held) held.push_back(pc.value());
      nlohmann::json moves = nlohmann::json::array();
      for (const auto& mv : spec.moves) {
        moves.push_back({{"from", mv.from.value()}, {"to", mv.to.value()},
                         {"semitones", mv.semitones}, {"label", mv.label}});
      }
      emit(out, MessageKind::kRotation,
           {{"from_root", spec.from_root.value()}, {"to_root", spec.to_root.value()},
            {"angle_degrees", spec.angle_degrees}, {"duration_seconds", spec.duration_seconds}, {"held", held},
            {"moves", moves}, {"cadence", spec.cadence},
            {"emphasis_token", spec.emphasis_token ? nlohmann::json(*spec.emphasis_token) : nlohmann::json(nullptr)}});
    }

    const tonal::ChordStyles styles = tonal::line_styles(chord, config_.palette);
    nlohmann::json triad{{"chord", idx ? nlohmann::json(*idx) : nlohmann::json(nullptr)}};
    if (chord) {
      const tonal::ChordShape shape = tonal::triangle_of(*chord);
      triad["root"] = chord->root.value();
      triad["third"] = tonal::to_string(chord->third);
      triad["fifth"] = tonal::to_string(chord->fifth);
      triad["seventh"] = tonal::to_string(chord->seventh);
      triad["cadence"] = chord->cadence;
      triad["start"] = chord->start_beat;
      triad["end"] = chord->end_beat;
      triad["main"] = points_json(shape.main);
      triad["seventh_triangle"] = shape.seventh ? points_json(*shape.seventh) : nlohmann::json(nullptr);
      nlohmann::json edges = nlohmann::json::array();
      for (const auto& e : styles.edges) {
        edges.push_back({{"from", e.from.value()}, {"to", e.to.value()}, {"color", e.color}});
      }
      triad["edges"] = edges;
    }
    emit(out, MessageKind::kTriad, triad);

    const tonal::CircleGeometry geometry;
    nlohmann::json dots = nlohmann::json::array();
    for (const auto& tone : styles.tones) {
      dots.push_back({{"pc", tone.pc.value()},
                      {"name", tonal::pitch_class_name(tone.pc)},
                      {"angle", geometry.angle_degrees(tone.pc)},
                      {"color", tone.color},
                      {"role", tone.degree ? nlohmann::json(tonal::to_string(*tone.degree)) : nlohmann::json(nullptr)}});
    }
    emit(out, MessageKind::kCircleState, {{"chord", triad["chord"]}, {"dots", dots}});
    chord_ = idx;
  }

  std::map<int, std::string> lit;
  for (int midi : tonal::lit_lines(*tonal_, beats_)) {
    lit[midi] = tonal::pitch_class_color(tonal::PitchClass::of_midi(midi), chord, config_.palette);
  }
  for (const auto& [midi, color] : lit_) {
    if (!lit.count(midi)) {
      emit(out, MessageKind::kGridLine, {{"midi", midi}, {"lit", false}});
    }
  }
  for (const auto& [midi, color] : lit) {
    auto it = lit_.find(midi);
    if (it != lit_.end() && it->second == color) continue;
    const auto pc = tonal::PitchClass::of_midi(midi);
    emit(out, MessageKind::kGridLine,
         {{"midi", midi},
          {"pc", pc.value()},
          {"name", tonal::pitch_class_name(pc)},
          {"y", layout::y_of(midi_to_hz(midi, 440.0), *segments_, 440.0)},
          {"color", color},
          {"main_triad", tonal::in_main_triad(pc)},
          {"lit", true}});
  }
  lit_ = std::move(lit);
}

FrameOutput Engine::process(const audio::MultiChannelFrame& frame) {
  FrameOutput out;
  for (auto& e : commands_.drain()) apply(e, out);
  if (paused_) return out;

  const bool first = !started_;
  started_ = true;
  const double prev = beats_;

  const audio::MonoFrame mono = audio::mixdown(frame, gains_);
  const follower::FeatureVector feature = features_(mono.samples);
  const follower::ScorePosition pos = follower_.step(feature);
  beats_ = std::max(0.0, pos.beats);
  exhausted_ = pos.exhausted;
  t_ = frame.start_time;

  cue_messages(out, first ? -std::numeric_limits<double>::infinity() : prev, beats_);
  tonal_messages(out, first);

  std::vector<float> scaled;
  for (Voice v : kAllVoices) {
    const std::size_t c = index_of(v);
    const auto& samples = frame.samples[c];
    scaled.resize(samples.size());
    for (std::size_t n = 0; n < samples.size(); ++n) {
      scaled[n] = static_cast<float>(samples[n] * gains_[c]);
    }
    const pitch::PitchFrame pf = pitch_.track(v, frame.index, scaled);
    const timeline::TrackerUpdate upd = notes_[c].advance(t_, beats_);
    for (const auto& m : upd.mappings) emit(out, MessageKind::kSegmentState, segment_state_json(m));
    if (upd.head && pf.voiced()) {
      emit(out, MessageKind::kCurvePoint,
           {{"voice", to_string(v)},
            {"note", upd.head->note_id},
            {"segment", upd.head->segment->id},
            {"theta", upd.head->theta},
            {"x", upd.head->x},
            {"y", layout::y_of(*pf.f0, *segments_, config_.a4_hz)},
            {"f0", *pf.f0},
            {"amplitude", pf.amplitude},
            {"width", layout::stroke_width(pf.amplitude, 0.0, config_.stroke)},
            {"color", layout::voice_style(v).color}});
    }
  }

  emit(out, MessageKind::kFollowerHealth,
       {{"confidence", pos.confidence}, {"ref_frame", pos.ref_frame}, {"ref_time", pos.ref_time},
        {"input_frame", frame.index}, {"exhausted", pos.exhausted}});

  nlohmann::json clock{{"t", t_}, {"frame", frame.index}};
  const layout::CueState state = layout::apply_cues(*segments_, beats_);
  if (!last_cue_state_ || !(state == *last_cue_state_)) {
    clock["opacity"] = cue_state_json(state);
    last_cue_state_ = state;
  }
  emit(out, MessageKind::kClock, clock);
  return out;
}

FrameOutput Engine::finish() {
  FrameOutput out = poll_commands();
  beats_ = reference_->beats.last_beat();
  emit(out, MessageKind::kClock, {{"t", t_}, {"final", true}});
  return out;
}

nlohmann::json Engine::describe() const {
  nlohmann::json voices = nlohmann::json::object();
  for (Voice v : kAllVoices) {
    const auto style = layout::voice_style(v);
    voices[std::string(to_string(v))] = {{"color", style.color}, {"hex", style.hex}, {"marker", style.marker}};
  }
  const auto& p = config_.palette;
  return {{"sample_rate", config_.audio.sample_rate},
          {"frame_length", config_.audio.frame_length},
          {"hop", config_.audio.hop},
          {"tempo_seed", config_.tempo_seed},
          {"anim_seconds", config_.anim_seconds},
          {"rotation_seconds", config_.rotation_seconds},
          {"a4_hz", config_.a4_hz},
          {"stroke",
           {{"w_min", config_.stroke.w_min}, {"w_max", config_.stroke.w_max}, {"gamma", config_.stroke.gamma},
            {"tau", config_.stroke.tau}, {"r_floor", config_.stroke.r_floor}}},
          {"layout",
           {{"pixels_per_beat", segments_->pixels_per_beat}, {"octave_height", segments_->octave_height},
            {"y_reference", segments_->y_reference}}},
          {"voices", voices},
          {"palette",
           {{"d", p.d}, {"f", p.f}, {"a", p.a}, {"root", p.root}, {"fifth_perfect", p.fifth_perfect},
            {"fifth_other", p.fifth_other}, {"third_major", p.third_major}, {"third_minor", p.third_minor},
            {"seventh_minor", p.seventh_minor}, {"seventh_major", p.seventh_major},
            {"seventh_diminished", p.seventh_diminished}, {"neutral", p.neutral}}},
          {"beats", {{"first", reference_->beats.first_beat()}, {"last", reference_->beats.last_beat()}}},
          {"reference", {{"frames", reference_->size()}, {"dims", reference_->dims}}}};
}

}  // namespace fuguescope::engine
