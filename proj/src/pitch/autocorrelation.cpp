#include "fuguescope/pitch/autocorrelation.hpp"

#include <algorithm>
#include <stdexcept>

namespace fuguescope::pitch {

Autocorrelator::Autocorrelator(std::size_t frame_length)
    : frame_length_(frame_length),
      fft_(dsp::next_pow2(2 * std::max<std::size_t>(frame_length, 1))),
      buffer_(fft_.size()),
      spectrum_(fft_.bins()) {
  if (frame_length == 0) throw std::invalid_argument("autocorrelation: empty frame");
}

std::vector<double> Autocorrelator::operator()(std::span<const float> frame) {
  if (frame.size() != frame_length_) {
    throw std::invalid_argument("autocorrelation: frame length differs from plan");
  }
  std::fill(buffer_.begin(), buffer_.end(), 0.0);
  std::copy(frame.begin(), frame.end(), buffer_.begin());
  fft_.forward(buffer_, spectrum_);
  for (auto& bin : spectrum_) bin = std::norm(bin);
  fft_.inverse(spectrum_, buffer_);

  const double scale = 1.0 / static_cast<double>(fft_.size());
  std::vector<double> acf(frame_length_);
  for (std::size_t k = 0; k < frame_length_; ++k) acf[k] = buffer_[k] * scale;
  return acf;
}

std::vector<double> autocorrelation(std::span<const float> frame) {
  Autocorrelator ac(frame.size());
  return ac(frame);
}

}  // namespace fuguescope::pitch
