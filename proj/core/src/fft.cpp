#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <memory>
#include <mutex>

#include "hjdyn/error.hpp"

namespace hjdyn::detail {

namespace {

std::mutex& planner_lock() {
  static std::mutex m;
  return m;
}

struct Buffer {
  explicit Buffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (!data) throw std::bad_alloc();
  }
  ~Buffer() { fftw_free(data); }
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;
  fftw_complex* data;
};

}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
  if (n == 0) throw ConfigError("FFT length must be positive");
  Buffer in(n), out(n);
  std::lock_guard lock(planner_lock());
  const int len = static_cast<int>(n);
  forward_ = fftw_plan_dft_1d(len, in.data, out.data, FFTW_FORWARD, FFTW_ESTIMATE);
  backward_ = fftw_plan_dft_1d(len, in.data, out.data, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!forward_ || !backward_) throw Error("FFTW could not create a plan");
}

Fft::~Fft() {
  std::lock_guard lock(planner_lock());
  if (forward_) fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  if (backward_) fftw_destroy_plan(static_cast<fftw_plan>(backward_));
}

void Fft::run(void* plan, std::span<const std::complex<double>> in,
              std::span<std::complex<double>> out, double scale) const {
  if (in.size() != n_ || out.size() != n_) throw ConfigError("FFT length mismatch");
  // Private aligned buffers keep concurrent calls on one plan independent.
  Buffer a(n_), b(n_);
  std::copy(in.begin(), in.end(), reinterpret_cast<std::complex<double>*>(a.data));
  fftw_execute_dft(static_cast<fftw_plan>(plan), a.data, b.data);
  const auto* res = reinterpret_cast<const std::complex<double>*>(b.data);
  for (std::size_t i = 0; i < n_; ++i) out[i] = res[i] * scale;
}

void Fft::forward(std::span<const std::complex<double>> in,
                  std::span<std::complex<double>> out) const {
  run(forward_, in, out, 1.0);
}

void Fft::backward(std::span<const std::complex<double>> in,
                   std::span<std::complex<double>> out) const {
  run(backward_, in, out, 1.0 / static_cast<double>(n_));
}

}  // namespace hjdyn::detail
