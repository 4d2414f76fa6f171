#include "fuguescope/follower/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fuguescope/error.hpp"

namespace fuguescope::follower {
namespace {

constexpr double kLogFloor = 1e-10;

}  // namespace

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

FeatureExtractor::FeatureExtractor(double sample_rate, std::size_t frame_length,
                                   FeatureConfig config)
    : config_(config),
      frame_length_(frame_length),
      fft_(dsp::next_pow2(frame_length)),
      window_(frame_length),
      buffer_(frame_length),
      spectrum_(fft_.bins()) {
  if (config_.dims == 0 || config_.dims >= config_.mel_bands) {
    throw ConfigError("feature config: need 0 < dims < mel_bands");
  }
  if (!(config_.f_low > 0.0 && config_.f_low < config_.f_high &&
        config_.f_high <= sample_rate / 2.0)) {
    throw ConfigError("feature config: need 0 < f_low < f_high <= sample_rate/2");
  }

  for (std::size_t i = 0; i < frame_length; ++i) {
    window_[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                      static_cast<double>(frame_length));
  }

  // Triangular filters with edges equally spaced on the mel scale.
  const double mel_lo = hz_to_mel(config_.f_low);
  const double mel_hi = hz_to_mel(config_.f_high);
  const std::size_t m = config_.mel_bands;
  std::vector<double> edges(m + 2);
  for (std::size_t i = 0; i < m + 2; ++i) {
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                      static_cast<double>(m + 1));
  }
  const double bin_hz = sample_rate / static_cast<double>(fft_.size());
  bands_.resize(m);
  for (std::size_t b = 0; b < m; ++b) {
    const double left = edges[b];
    const double centre = edges[b + 1];
    const double right = edges[b + 2];
    const auto first = static_cast<std::size_t>(std::ceil(left / bin_hz));
    const auto last = std::min(fft_.bins() - 1, static_cast<std::size_t>(std::floor(right / bin_hz)));
    bands_[b].first_bin = first;
    for (std::size_t k = first; k <= last; ++k) {
      const double f = static_cast<double>(k) * bin_hz;
      const double w = f <= centre ? (f - left) / (centre - left) : (right - f) / (right - centre);
      bands_[b].weights.push_back(std::max(0.0, w));
    }
  }

  // Orthonormal DCT-II rows 1..dims.
  dct_.resize(config_.dims * m);
  for (std::size_t q = 0; q < config_.dims; ++q) {
    const double k = static_cast<double>(q + 1);
    for (std::size_t b = 0; b < m; ++b) {
      dct_[q * m + b] = std::sqrt(2.0 / static_cast<double>(m)) *
                        std::cos(std::numbers::pi * k * (static_cast<double>(b) + 0.5) /
                                 static_cast<double>(m));
    }
  }
}

FeatureVector FeatureExtractor::operator()(std::span<const float> frame) {
  if (frame.size() != frame_length_) {
    throw std::invalid_argument("feature extraction: frame length differs from configuration");
  }
  FeatureVector out(config_.dims, 0.0f);

  double energy = 0.0;
  for (std::size_t i = 0; i < frame_length_; ++i) {
    energy += static_cast<double>(frame[i]) * frame[i];
    buffer_[i] = frame[i] * window_[i];
  }
  if (std::sqrt(energy / static_cast<double>(frame_length_)) < config_.silence_rms) return out;

  fft_.forward(buffer_, spectrum_);
  std::vector<double> log_mel(config_.mel_bands);
  for (std::size_t b = 0; b < bands_.size(); ++b) {
    double e = 0.0;
    const auto& band = bands_[b];
    for (std::size_t j = 0; j < band.weights.size(); ++j) {
      e += band.weights[j] * std::norm(spectrum_[band.first_bin + j]);
    }
    log_mel[b] = std::log(e + kLogFloor);
  }

  double norm = 0.0;
  std::vector<double> cep(config_.dims);
  for (std::size_t q = 0; q < config_.dims; ++q) {
    double acc = 0.0;
    for (std::size_t b = 0; b < config_.mel_bands; ++b) acc += dct_[q * config_.mel_bands + b] * log_mel[b];
    cep[q] = acc;
    norm += acc * acc;
  }
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (std::size_t q = 0; q < config_.dims; ++q) out[q] = static_cast<float>(cep[q] / norm);
  }
  return out;
}

double feature_distance(std::span<const float> a, std::span<const float> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

}  // namespace fuguescope::follower
