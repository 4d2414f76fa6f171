#include "fuguescope/app/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fuguescope::app {

follower::FeatureSequence stretch_features(const follower::ReferenceIndex& reference, double factor) {
  if (!(factor > 0.0)) throw std::invalid_argument("stretch factor must be positive");
  const std::size_t m = reference.size();
  const std::size_t d = reference.dims;
  follower::FeatureSequence out;
  out.dims = d;
  if (m == 0) return out;
  const auto n = static_cast<std::size_t>(std::floor((m - 1) * factor)) + 1;
  out.data.resize(n * d);
  for (std::size_t t = 0; t < n; ++t) {
    const double pos = std::min(static_cast<double>(t) / factor, static_cast<double>(m - 1));
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, m - 1);
    const double w = pos - lo;
    const auto a = reference.feature(lo);
    const auto b = reference.feature(hi);
    double norm = 0.0;
    float* dst = out.data.data() + t * d;
    for (std::size_t k = 0; k < d; ++k) {
      const double v = (1.0 - w) * a[k] + w * b[k];
      dst[k] = static_cast<float>(v);
      norm += v * v;
    }
    if (norm > 0.0) {
      const double inv = 1.0 / std::sqrt(norm);
      for (std::size_t k = 0; k < d; ++k) dst[k] = static_cast<float>(dst[k] * inv);
    }
  }
  return out;
}

StretchResult evaluate_sequence(const follower::ReferenceIndex& reference,
                                const follower::FeatureSequence& input, double factor,
                                const follower::FollowerConfig& config, bool with_dtw) {
  StretchResult r;
  r.factor = factor;
  r.input_frames = input.size();
  if (input.size() == 0) return r;

  follower::OnlineFollower follower(reference, config);
  const double hop = reference.hop;
  const double last_time = (reference.size() - 1) * hop;
  double sum_ms = 0.0, sum_beats = 0.0;
  for (std::size_t t = 0; t < input.size(); ++t) {
    const follower::ScorePosition pos = follower.step(input[t]);
    r.oltw_frames.push_back(pos.ref_frame);
    const double truth = std::min(t * hop / factor, last_time);
    const double err_ms = std::abs(pos.ref_time - truth) * 1000.0;
    const double err_beats = std::abs(reference.beats.beats_at(pos.ref_time) - reference.beats.beats_at(truth));
    sum_ms += err_ms;
    sum_beats += err_beats;
    r.max_error_ms = std::max(r.max_error_ms, err_ms);
    r.max_error_beats = std::max(r.max_error_beats, err_beats);
  }
  r.mean_error_ms = sum_ms / input.size();
  r.mean_error_beats = sum_beats / input.size();

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(input.size());
  for (std::size_t t = 0; t < input.size(); ++t) {
    const double x = static_cast<double>(r.oltw_frames[t]);
    const double y = static_cast<double>(t);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  r.path_slope = denom > 0.0 ? (n * sxy - sx * sy) / denom : 0.0;

  if (with_dtw) {
    const auto dtw = follower::offline_dtw(input, follower::to_sequence(reference));
    const auto per_input = follower::reference_frame_per_input(dtw, input.size());
    double dev = 0.0;
    for (std::size_t t = 0; t < input.size(); ++t) {
      dev += std::abs(static_cast<double>(r.oltw_frames[t]) - per_input[t]);
    }
    r.dtw_mean_frames = dev / input.size();
  }
  return r;
}

StretchResult evaluate_stretch(const follower::ReferenceIndex& reference, double factor,
                               const follower::FollowerConfig& config, bool with_dtw) {
  return evaluate_sequence(reference, stretch_features(reference, factor), factor, config, with_dtw);
}

nlohmann::json to_json(const StretchResult& r) {
  nlohmann::json j{{"factor", r.factor},
                   {"input_frames", r.input_frames},
                   {"mean_error_ms", r.mean_error_ms},
                   {"max_error_ms", r.max_error_ms},
                   {"mean_error_beats", r.mean_error_beats},
                   {"max_error_beats", r.max_error_beats},
                   {"path_slope", r.path_slope}};
  j["dtw_mean_frames"] = r.dtw_mean_frames >= 0.0 ? nlohmann::json(r.dtw_mean_frames) : nlohmann::json(nullptr);
  return j;
}

}  // namespace fuguescope::app
