#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace le2e::detail {

// Iterative radix-2 complex FFT for power-of-two sizes. Immutable after
// construction, so one plan can serve many threads.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  void forward(std::complex<double>* data) const;

  static bool supports(std::size_t n) noexcept { return n >= 1 && (n & (n - 1)) == 0; }

 private:
  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  std::vector<std::complex<double>> twiddles_;
};

}  // namespace le2e::detail
