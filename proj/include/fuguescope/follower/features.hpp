#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fuguescope/dsp/real_fft.hpp"

namespace fuguescope::follower {

using FeatureVector = std::vector<float>;

struct FeatureConfig {
  std::size_t mel_bands = 40;
  double f_low = 60.0;
  double f_high = 6000.0;
  std::size_t dims = 25;      // cepstral coefficients 1..dims
  double silence_rms = 1e-5;  // frames below map to the zero vector
};

// Log-mel cepstrum: Hann window, power spectrum, triangular mel bands, log,
// orthonormal DCT-II, drop c0, keep `dims` coefficients, L2-normalize.
class FeatureExtractor {
 public:
  FeatureExtractor(double sample_rate, std::size_t frame_length, FeatureConfig config = {});

  FeatureVector operator()(std::span<const float> frame);

  std::size_t dims() const { return config_.dims; }
  const FeatureConfig& config() const { return config_; }

 private:
  struct Band {
    std::size_t first_bin = 0;
    std::vector<double> weights;
  };

  FeatureConfig config_;
  std::size_t frame_length_;
  dsp::RealFft fft_;
  std::vector<double> window_;
  std::vector<Band> bands_;
  std::vector<double> dct_;  // dims x mel_bands, row-major
  std::vector<double> buffer_;
  std::vector<std::complex<double>> spectrum_;
};

double feature_distance(std::span<const float> a, std::span<const float> b);

double hz_to_mel(double hz);
double mel_to_hz(double mel);

}  // namespace fuguescope::follower
