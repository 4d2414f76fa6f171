#pragma once

#include <vector>

#include <json.hpp>

#include "fuguescope/follower/offline_dtw.hpp"
#include "fuguescope/follower/oltw.hpp"
#include "fuguescope/follower/reference.hpp"

namespace fuguescope::app {

inline const std::vector<double> kDefaultStretchFactors = {0.5, 0.75, 1.25, 1.5, 2.0};

// Input features for a performance `factor` times as long as the reference:
// input frame t is the reference feature track linearly interpolated at
// t / factor, renormalized to unit length.
follower::FeatureSequence stretch_features(const follower::ReferenceIndex& reference, double factor);

struct StretchResult {
  double factor = 1.0;
  std::size_t input_frames = 0;
  double mean_error_ms = 0.0;
  double max_error_ms = 0.0;
  double mean_error_beats = 0.0;
  double max_error_beats = 0.0;
  double path_slope = 0.0;  // input frames per reference frame, least squares
  // Mean |OLTW - offline DTW| reference frame; negative when not computed.
  double dtw_mean_frames = -1.0;
  std::vector<std::size_t> oltw_frames;  // reference frame per input frame
};

// Follows `input` and scores it against the analytic warp
// ref_time = input_time / factor.
StretchResult evaluate_sequence(const follower::ReferenceIndex& reference,
                                const follower::FeatureSequence& input, double factor,
                                const follower::FollowerConfig& config = {}, bool with_dtw = true);

StretchResult evaluate_stretch(const follower::ReferenceIndex& reference, double factor,
                               const follower::FollowerConfig& config = {}, bool with_dtw = true);

nlohmann::json to_json(const StretchResult& r);

}  // namespace fuguescope::app
