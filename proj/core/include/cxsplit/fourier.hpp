#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace cxsplit {

/// In-place complex DFT of fixed length backed by FFTW.
///
/// Both directions are unnormalized: backward(forward(u)) = n u. Plans are
/// created once with FFTW_ESTIMATE, so results are reproducible run to run.
/// Executing a plan is thread-safe; planning is serialized internally.
class FourierTransform {
 public:
  explicit FourierTransform(std::size_t n);
  ~FourierTransform();

  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;
  FourierTransform(FourierTransform&& other) noexcept;
  FourierTransform& operator=(FourierTransform&& other) noexcept;

  std::size_t size() const noexcept { return n_; }

  void forward(std::span<std::complex<double>> data) const;
  void backward(std::span<std::complex<double>> data) const;

 private:
  std::size_t n_ = 0;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

}  // namespace cxsplit
