#pragma once

#include <complex>
#include <cstddef>

namespace gkdv::detail {

// Cached FFTW plans for real transforms of length n. Plans are created with
// FFTW_ESTIMATE so that results are bitwise reproducible run to run.
class RealFft {
 public:
  static const RealFft& get(std::size_t n);

  std::size_t size() const { return n_; }
  void forward(const double* in, std::complex<double>* out) const;
  // Unnormalized; the caller divides by n. Input is preserved.
  void inverse(const std::complex<double>* in, double* out) const;

  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  ~RealFft();

 private:
  explicit RealFft(std::size_t n);
  std::size_t n_;
  void* r2c_;
  void* c2r_;
};

}  // namespace gkdv::detail
