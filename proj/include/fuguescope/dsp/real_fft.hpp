#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace fuguescope::dsp {

// Real-input FFT of fixed size n (forward r2c, inverse c2r), unnormalized.
// Owns its FFTW plans; not safe for concurrent use of one instance.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  RealFft(RealFft&& other) noexcept;
  RealFft& operator=(RealFft&& other) noexcept;

  std::size_t size() const { return n_; }
  std::size_t bins() const { return n_ / 2 + 1; }

  // `in` shorter than n is zero-padded. `out` must hold bins() values.
  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  // `out` receives n values, scaled by n relative to the original signal.
  void inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  void release();

  std::size_t n_ = 0;
  double* real_ = nullptr;
  void* spectrum_ = nullptr;  // fftw_complex*
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

std::size_t next_pow2(std::size_t n);

}  // namespace fuguescope::dsp
