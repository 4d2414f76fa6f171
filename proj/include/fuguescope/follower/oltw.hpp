#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "fuguescope/follower/reference.hpp"

namespace fuguescope::follower {

struct FollowerConfig {
  std::size_t band_width = 400;  // c, in frames
  int max_run_count = 3;         // cap on consecutive one-sided advances
};

struct ScorePosition {
  double beats = 0.0;
  double ref_time = 0.0;
  double confidence = 0.0;
  std::size_t ref_frame = 0;
  bool exhausted = false;  // the reference has been fully consumed
};

// Online time warping of a live feature stream against a reference index.
// Keeps a band of accumulated costs of width c around the path head and
// decides per step whether to advance the input, the reference, or both.
class OnlineFollower {
 public:
  enum class Increment { kNone, kRow, kColumn, kBoth };

  // `reference` must outlive the follower.
  explicit OnlineFollower(const ReferenceIndex& reference, FollowerConfig config = {});

  ScorePosition step(std::span<const float> feature);

  // Jumps to the reference frame of `target_beats` and restarts the band
  // there. Throws std::out_of_range outside the annotated beat range.
  void override_position(double target_beats);

  ScorePosition position() const;
  std::size_t current_ref_frame() const { return current_ref_frame_; }
  std::size_t input_frames() const { return input_frames_; }
  std::optional<std::size_t> override_pending() const { return override_pending_; }

  // Work accounting, for bounded-work checks.
  std::size_t cells_last_step() const { return cells_last_step_; }
  std::size_t cells_total() const { return cells_total_; }

  const FollowerConfig& config() const { return config_; }
  const ReferenceIndex& reference() const { return *reference_; }

 private:
  struct Row {
    std::size_t lo = 0;  // first local column held
    std::vector<double> cost;
  };

  double cost_at(std::size_t i, std::size_t k) const;
  double local_distance(std::size_t i, std::size_t k) const;
  void evaluate(std::size_t i, std::size_t k);
  void add_row(std::span<const float> feature);
  void add_column();
  Increment next_increment() const;
  void note_increment(Increment inc);
  void restart(std::size_t origin);
  std::size_t row_argmin(double* confidence) const;

  const ReferenceIndex* reference_;
  FollowerConfig config_;

  // DP in local coordinates: local column k is reference frame origin_ + k,
  // local row i is the i-th input since the last (re)start.
  std::size_t origin_ = 0;
  std::deque<Row> rows_;
  std::size_t first_row_ = 0;  // local index of rows_.front()
  std::deque<std::vector<float>> inputs_;
  bool started_ = false;
  std::size_t t_ = 0;
  std::size_t j_ = 0;
  Increment pending_ = Increment::kNone;
  Increment previous_ = Increment::kNone;
  int run_count_ = 1;

  std::size_t current_ref_frame_ = 0;
  double confidence_ = 0.0;
  std::size_t input_frames_ = 0;
  std::optional<std::size_t> override_pending_;
  std::size_t cells_last_step_ = 0;
  std::size_t cells_total_ = 0;
};

}  // namespace fuguescope::follower
