#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "fuguescope/follower/reference.hpp"

namespace fuguescope::follower {

// Frame-major feature sequence, same layout as ReferenceIndex::data.
struct FeatureSequence {
  std::size_t dims = 0;
  std::vector<float> data;

  std::size_t size() const { return dims == 0 ? 0 : data.size() / dims; }
  std::span<const float> operator[](std::size_t i) const { return {data.data() + i * dims, dims}; }
};

struct DtwResult {
  double cost = 0.0;
  // (input frame, reference frame) pairs from (0,0) to (M-1,N-1).
  std::vector<std::pair<std::size_t, std::size_t>> path;
};

// Full (unbanded) DTW with the same local distance and step weights as the
// online follower: diagonal 2d, horizontal and vertical d.
DtwResult offline_dtw(const FeatureSequence& input, const FeatureSequence& reference);

// Mean reference frame matched to each input frame along a path.
std::vector<double> reference_frame_per_input(const DtwResult& result, std::size_t input_frames);

FeatureSequence to_sequence(const ReferenceIndex& index);

}  // namespace fuguescope::follower
