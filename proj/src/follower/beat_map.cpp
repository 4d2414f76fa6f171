#include "fuguescope/follower/beat_map.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>

#include "fuguescope/error.hpp"

namespace fuguescope::follower {
namespace {

// Piecewise-linear interpolation through (xs, ys), xs strictly increasing,
// with end-segment slopes outside the range.
double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  auto upper = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = static_cast<std::size_t>(upper - xs.begin());
  i = std::clamp<std::size_t>(i, 1, xs.size() - 1);
  const double x0 = xs[i - 1];
  const double x1 = xs[i];
  return ys[i - 1] + (x - x0) / (x1 - x0) * (ys[i] - ys[i - 1]);
}

}  // namespace

BeatTable::BeatTable(std::vector<double> times, std::vector<double> beats)
    : times_(std::move(times)), beats_(std::move(beats)) {
  if (times_.size() != beats_.size()) {
    throw ConfigError("beat table: times and beat numbers differ in length");
  }
  if (times_.size() < 2) throw ConfigError("beat table: need at least two annotated beats");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) {
      throw ConfigError("beat table: time_sec must be strictly increasing (entry " +
                        std::to_string(i) + ")");
    }
    if (!(beats_[i] > beats_[i - 1])) {
      throw ConfigError("beat table: beat numbers must be strictly increasing (entry " +
                        std::to_string(i) + ")");
    }
  }
}

double BeatTable::beats_at(double ref_time) const { return interpolate(times_, beats_, ref_time); }

double BeatTable::time_at(double beats) const { return interpolate(beats_, times_, beats); }

BeatTable read_beat_annotations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open beat annotation file");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }
  if (!doc.is_array()) throw ConfigError(path.string() + ": expected a JSON array of beats");
  std::vector<double> times;
  std::vector<double> beats;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& entry = doc[i];
    if (!entry.is_object() || !entry.contains("time_sec") || !entry.contains("beat") ||
        !entry["time_sec"].is_number() || !entry["beat"].is_number()) {
      throw ConfigError(path.string() + ": entry " + std::to_string(i) +
                        " needs numeric time_sec and beat");
    }
    times.push_back(entry["time_sec"].get<double>());
    beats.push_back(entry["beat"].get<double>());
  }
  try {
    return BeatTable(std::move(times), std::move(beats));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_beat_annotations(const std::filesystem::path& path, const BeatTable& table) {
  nlohmann::json doc = nlohmann::json::array();
  for (std::size_t i = 0; i < table.size(); ++i) {
    doc.push_back({{"time_sec", table.times()[i]}, {"beat", table.beats()[i]}});
  }
  std::ofstream out(path);
  if (!out) throw ConfigError(path.string() + ": cannot write beat annotation file");
  out << doc.dump(1) << '\n';
}

}  // namespace fuguescope::follower
