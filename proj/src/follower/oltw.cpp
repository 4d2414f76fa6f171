#include "fuguescope/follower/oltw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fuguescope/error.hpp"

namespace fuguescope::follower {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double normalized(double cost, std::size_t i, std::size_t k) {
  return cost / static_cast<double>(i + k + 2);
}

}  // namespace

OnlineFollower::OnlineFollower(const ReferenceIndex& reference, FollowerConfig config)
    : reference_(&reference), config_(config) {
  if (reference.size() == 0) throw ConfigError("follower: empty reference index");
  if (reference.beats.empty()) throw ConfigError("follower: reference has no beat table");
  if (config_.band_width < 2) throw ConfigError("follower: band width must be >= 2");
  if (config_.max_run_count < 1) throw ConfigError("follower: MaxRunCount must be >= 1");
}

double OnlineFollower::cost_at(std::size_t i, std::size_t k) const {
  if (i < first_row_ || i >= first_row_ + rows_.size()) return kInf;
  const Row& row = rows_[i - first_row_];
  if (k < row.lo || k >= row.lo + row.cost.size()) return kInf;
  return row.cost[k - row.lo];
}

double OnlineFollower::local_distance(std::size_t i, std::size_t k) const {
  const auto& input = inputs_[i - first_row_];
  return feature_distance(input, reference_->feature(origin_ + k));
}

void OnlineFollower::evaluate(std::size_t i, std::size_t k) {
  const double d = local_distance(i, k);
  double best = kInf;
  if (i == 0 && k == 0) {
    best = 2.0 * d;
  } else {
    // Diagonal first so that it wins ties.
    if (i > 0 && k > 0) best = cost_at(i - 1, k - 1) + 2.0 * d;
    if (i > 0) best = std::min(best, cost_at(i - 1, k) + d);
    if (k > 0) best = std::min(best, cost_at(i, k - 1) + d);
  }
  Row& row = rows_[i - first_row_];
  if (row.cost.empty()) row.lo = k;
  row.cost.push_back(best);
  ++cells_last_step_;
}

void OnlineFollower::add_row(std::span<const float> feature) {
  const std::size_t i = started_ ? t_ + 1 : 0;
  rows_.push_back(Row{});
  inputs_.emplace_back(feature.begin(), feature.end());
  if (!started_) first_row_ = 0;
  // Rows older than the band never change again.
  while (rows_.size() > config_.band_width + 1) {
    rows_.pop_front();
    inputs_.pop_front();
    ++first_row_;
  }
  t_ = i;
  const std::size_t lo = j_ + 1 >= config_.band_width ? j_ + 1 - config_.band_width : 0;
  for (std::size_t k = lo; k <= j_; ++k) evaluate(i, k);
  started_ = true;
}

void OnlineFollower::add_column() {
  j_ += 1;
  const std::size_t lo = t_ + 1 >= config_.band_width ? t_ + 1 - config_.band_width : 0;
  for (std::size_t i = std::max(lo, first_row_); i <= t_; ++i) evaluate(i, j_);
}

OnlineFollower::Increment OnlineFollower::next_increment() const {
  if (run_count_ > config_.max_run_count) {
    return previous_ == Increment::kRow ? Increment::kColumn : Increment::kRow;
  }
  // Minimum normalized cost over the newest row and the newest column.
  double best = kInf;
  std::size_t best_i = t_;
  std::size_t best_k = j_;
  const Row& last = rows_.back();
  for (std::size_t n = 0; n < last.cost.size(); ++n) {
    const std::size_t k = last.lo + n;
    const double v = normalized(last.cost[n], t_, k);
    if (v < best || (v == best && k > best_k)) {
      best = v;
      best_i = t_;
      best_k = k;
    }
  }
  for (std::size_t i = first_row_; i < t_; ++i) {
    const double c = cost_at(i, j_);
    if (c == kInf) continue;
    const double v = normalized(c, i, j_);
    if (v < best) {
      best = v;
      best_i = i;
      best_k = j_;
    }
  }
  // The newest reference frame matched an older input: the input is ahead.
  if (best_i < t_) return Increment::kColumn;
  // The newest input matched an older reference frame: the reference is ahead.
  if (best_k < j_) return Increment::kRow;
  return Increment::kBoth;
}

void OnlineFollower::note_increment(Increment inc) {
  if (inc == previous_) {
    ++run_count_;
  } else {
    run_count_ = 1;
  }
  if (inc != Increment::kBoth) previous_ = inc;
}

void OnlineFollower::restart(std::size_t origin) {
  origin_ = origin;
  rows_.clear();
  inputs_.clear();
  first_row_ = 0;
  started_ = false;
  t_ = 0;
  j_ = 0;
  pending_ = Increment::kNone;
  previous_ = Increment::kNone;
  run_count_ = 1;
  current_ref_frame_ = origin;
}

std::size_t OnlineFollower::row_argmin(double* confidence) const {
  const Row& last = rows_.back();
  std::vector<double> values;
  values.reserve(last.cost.size());
  std::size_t best_k = last.lo;
  double best = kInf;
  for (std::size_t n = 0; n < last.cost.size(); ++n) {
    const std::size_t k = last.lo + n;
    const double v = normalized(last.cost[n], t_, k);
    if (v == kInf) continue;
    values.push_back(v);
    if (v < best) {
      best = v;
      best_k = k;
    }
  }
  if (confidence != nullptr) {
    *confidence = 0.0;
    if (values.size() > 1) {
      auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
      std::nth_element(values.begin(), mid, values.end());
      const double median = *mid;
      if (median > 0.0) *confidence = std::clamp((median - best) / median, 0.0, 1.0);
    }
  }
  return best_k;
}

ScorePosition OnlineFollower::step(std::span<const float> feature) {
  if (feature.size() != reference_->dims) {
    throw std::invalid_argument("follower: feature dimension differs from reference");
  }
  cells_last_step_ = 0;
  const std::size_t columns = reference_->size() - origin_;

  if (override_pending_) {
    restart(*override_pending_);
    override_pending_.reset();
  }

  if (!started_) {
    add_row(feature);
  } else {
    Increment inc = pending_;
    add_row(feature);
    if (inc == Increment::kBoth && j_ + 1 < columns) {
      add_column();
    } else if (inc == Increment::kBoth) {
      inc = Increment::kRow;
    }
    note_increment(inc);
  }

  // Advance the reference until the next decision needs a new input frame.
  for (;;) {
    Increment inc = next_increment();
    if (inc != Increment::kRow && j_ + 1 >= columns) inc = Increment::kRow;
    if (inc == Increment::kColumn) {
      add_column();
      note_increment(inc);
      continue;
    }
    pending_ = inc;
    break;
  }

  double confidence = 0.0;
  const std::size_t frame = origin_ + row_argmin(&confidence);
  current_ref_frame_ = std::max(current_ref_frame_, frame);
  confidence_ = confidence;
  ++input_frames_;
  cells_total_ += cells_last_step_;
  return position();
}

ScorePosition OnlineFollower::position() const {
  ScorePosition pos;
  pos.ref_frame = current_ref_frame_;
  pos.ref_time = static_cast<double>(current_ref_frame_) * reference_->hop;
  pos.confidence = confidence_;
  pos.exhausted = current_ref_frame_ + 1 >= reference_->size();
  pos.beats = reference_->beats.beats_at(pos.ref_time);
  if (pos.exhausted) pos.beats = reference_->beats.last_beat();
  pos.beats = std::max(0.0, pos.beats);
  return pos;
}

void OnlineFollower::override_position(double target_beats) {
  const BeatTable& beats = reference_->beats;
  if (!std::isfinite(target_beats) || !beats.contains_beat(target_beats)) {
    throw std::out_of_range("override target beat " + std::to_string(target_beats) +
                            " outside annotated range [" + std::to_string(beats.first_beat()) +
                            ", " + std::to_string(beats.last_beat()) + "]");
  }
  const double ref_time = beats.time_at(target_beats);
  const auto frame = static_cast<std::size_t>(std::clamp<long long>(
      std::llround(ref_time / reference_->hop), 0,
      static_cast<long long>(reference_->size()) - 1));
  override_pending_ = frame;
  current_ref_frame_ = frame;
  confidence_ = 0.0;
}

}  // namespace fuguescope::follower
