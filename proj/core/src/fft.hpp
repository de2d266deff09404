#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace hjdyn::detail {

/// One-dimensional complex DFT of fixed length. Plans are created under a
/// global lock; execution is reentrant.
class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  std::size_t size() const { return n_; }
  /// Unnormalized forward transform; `in` and `out` may alias.
  void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;
  /// Inverse transform scaled by 1/n.
  void backward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;

 private:
  void run(void* plan, std::span<const std::complex<double>> in,
           std::span<std::complex<double>> out, double scale) const;

  std::size_t n_;
  void* forward_ = nullptr;
  void* backward_ = nullptr;
};

}  // namespace hjdyn::detail
