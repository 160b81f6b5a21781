#include <cmath>

#include "checks.hpp"
#include "le2e/numerics.hpp"

namespace le2e {

Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, float eps) {
  using detail::require;
  require(x.rank() >= 1 && !x.empty(), "numerics", "layer_norm needs a non-empty tensor");
  const std::size_t d = x.shape().back();
  require(gamma.shape() == Shape{d} && beta.shape() == Shape{d}, "numerics",
          "layer_norm gamma/beta must be [" + std::to_string(d) + "]");
  require(eps > 0.0f, "numerics", "layer_norm eps must be positive");
  Tensor y(x.shape());
  const auto rows = static_cast<std::ptrdiff_t>(x.size() / d);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    const float* src = x.data() + static_cast<std::size_t>(r) * d;
    float* dst = y.data() + static_cast<std::size_t>(r) * d;
    double mean = 0.0;
    for (std::size_t i = 0; i < d; ++i) mean += src[i];
    mean /= static_cast<double>(d);
    double var = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double c = src[i] - mean;
      var += c * c;
    }
    var /= static_cast<double>(d);
    const auto inv = static_cast<float>(1.0 / std::sqrt(var + eps));
    const auto m = static_cast<float>(mean);
    for (std::size_t i = 0; i < d; ++i) dst[i] = (src[i] - m) * inv * gamma[i] + beta[i];
  }
  return y;
}

}  // namespace le2e
