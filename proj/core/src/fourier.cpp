#include "cxsplit/fourier.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cxsplit {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

FourierTransform::FourierTransform(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("FourierTransform: length must be positive");
  std::vector<std::complex<double>> scratch(n);
  const int len = static_cast<int>(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  forward_plan_ = fftw_plan_dft_1d(len, as_fftw(scratch.data()), as_fftw(scratch.data()), FFTW_FORWARD, flags);
  backward_plan_ = fftw_plan_dft_1d(len, as_fftw(scratch.data()), as_fftw(scratch.data()), FFTW_BACKWARD, flags);
  if (forward_plan_ == nullptr || backward_plan_ == nullptr) throw std::runtime_error("FFTW planning failed");
}

FourierTransform::~FourierTransform() {
  std::lock_guard lock(planner_mutex());
  if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (backward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
}

FourierTransform::FourierTransform(FourierTransform&& other) noexcept
    : n_(other.n_),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      backward_plan_(std::exchange(other.backward_plan_, nullptr)) {}

FourierTransform& FourierTransform::operator=(FourierTransform&& other) noexcept {
  if (this != &other) {
    std::swap(n_, other.n_);
    std::swap(forward_plan_, other.forward_plan_);
    std::swap(backward_plan_, other.backward_plan_);
  }
  return *this;
}

void FourierTransform::forward(std::span<std::complex<double>> data) const {
  if (data.size() != n_) throw std::invalid_argument("FourierTransform: size mismatch");
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(data.data()), as_fftw(data.data()));
}

void FourierTransform::backward(std::span<std::complex<double>> data) const {
  if (data.size() != n_) throw std::invalid_argument("FourierTransform: size mismatch");
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), as_fftw(data.data()), as_fftw(data.data()));
}

}  // namespace cxsplit
