#pragma once

#include <span>
#include <vector>

#include "fuguescope/dsp/real_fft.hpp"

namespace fuguescope::pitch {

// acf[k] = sum_n s[n] s[n+k] for k in [0, N), via a zero-padded FFT of
// length >= 2N (no circular wrap-around).
class Autocorrelator {
 public:
  explicit Autocorrelator(std::size_t frame_length);

  std::size_t frame_length() const { return frame_length_; }
  std::vector<double> operator()(std::span<const float> frame);

 private:
  std::size_t frame_length_;
  dsp::RealFft fft_;
  std::vector<double> buffer_;
  std::vector<std::complex<double>> spectrum_;
};

// One-shot convenience; plans a transform for the frame's length.
std::vector<double> autocorrelation(std::span<const float> frame);

}  // namespace fuguescope::pitch
