#pragma once

#include <filesystem>
#include <vector>

namespace fuguescope::follower {

// Annotated beats of the reference recording. Maps reference time to score
// position piecewise-linearly, extrapolating outside the annotated span with
// the slope of the nearest inter-beat interval.
class BeatTable {
 public:
  BeatTable() = default;
  // Throws ConfigError unless there are >= 2 entries with strictly
  // increasing times and beat numbers.
  BeatTable(std::vector<double> times, std::vector<double> beats);

  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& beats() const { return beats_; }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }

  double beats_at(double ref_time) const;
  // Inverse of beats_at.
  double time_at(double beats) const;

  double first_beat() const { return beats_.front(); }
  double last_beat() const { return beats_.back(); }
  bool contains_beat(double beats) const {
    return beats >= beats_.front() && beats <= beats_.back();
  }

 private:
  std::vector<double> times_;
  std::vector<double> beats_;
};

// JSON array of {"time_sec": number, "beat": number}.
BeatTable read_beat_annotations(const std::filesystem::path& path);
void write_beat_annotations(const std::filesystem::path& path, const BeatTable& table);

}  // namespace fuguescope::follower
