#include "fuguescope/follower/offline_dtw.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace fuguescope::follower {

DtwResult offline_dtw(const FeatureSequence& input, const FeatureSequence& reference) {
  const std::size_t m = input.size();
  const std::size_t n = reference.size();
  if (m == 0 || n == 0) throw std::invalid_argument("offline_dtw: empty sequence");
  if (input.dims != reference.dims) throw std::invalid_argument("offline_dtw: dimension mismatch");

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> cost(m * n, kInf);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return cost[i * n + j]; };

  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double d = feature_distance(input[i], reference[j]);
      if (i == 0 && j == 0) {
        at(i, j) = 2.0 * d;
        continue;
      }
      double best = kInf;
      if (i > 0 && j > 0) best = at(i - 1, j - 1) + 2.0 * d;
      if (i > 0) best = std::min(best, at(i - 1, j) + d);
      if (j > 0) best = std::min(best, at(i, j - 1) + d);
      at(i, j) = best;
    }
  }

  DtwResult result;
  result.cost = at(m - 1, n - 1);
  std::size_t i = m - 1;
  std::size_t j = n - 1;
  result.path.emplace_back(i, j);
  while (i > 0 || j > 0) {
    if (i == 0) {
      --j;
    } else if (j == 0) {
      --i;
    } else {
      const double d = feature_distance(input[i], reference[j]);
      const double here = at(i, j);
      // Retrace the predecessor that produced this cell, diagonal first.
      if (here == at(i - 1, j - 1) + 2.0 * d) {
        --i;
        --j;
      } else if (here == at(i - 1, j) + d) {
        --i;
      } else {
        --j;
      }
    }
    result.path.emplace_back(i, j);
  }
  std::reverse(result.path.begin(), result.path.end());
  return result;
}

std::vector<double> reference_frame_per_input(const DtwResult& result, std::size_t input_frames) {
  std::vector<double> sum(input_frames, 0.0);
  std::vector<std::size_t> count(input_frames, 0);
  for (const auto& [i, j] : result.path) {
    if (i >= input_frames) continue;
    sum[i] += static_cast<double>(j);
    ++count[i];
  }
  for (std::size_t i = 0; i < input_frames; ++i) {
    if (count[i] > 0) sum[i] /= static_cast<double>(count[i]);
  }
  return sum;
}

FeatureSequence to_sequence(const ReferenceIndex& index) {
  return FeatureSequence{index.dims, index.data};
}

}  // namespace fuguescope::follower
