#include <algorithm>
#include <vector>

#include "checks.hpp"
#include "le2e/numerics.hpp"

namespace le2e {

Tensor linear(const Tensor& x, const Tensor& weight, const Tensor& bias) {
  using detail::require;
  detail::require_rank(x, 2, "numerics", "linear input");
  detail::require_rank(weight, 2, "numerics", "linear weight");
  const std::size_t rows = x.dim(0), in = x.dim(1), out_dim = weight.dim(0);
  require(weight.dim(1) == in, "numerics",
          "linear weight " + shape_to_string(weight.shape()) + " does not match input width " +
              std::to_string(in));
  require(bias.empty() || bias.shape() == Shape{out_dim}, "numerics", "linear bias must be [out]");

  // [in, out] so the inner update is a contiguous axpy.
  const Tensor wt = transpose2d(weight);
  Tensor y({rows, out_dim});
  const auto n = static_cast<std::ptrdiff_t>(rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r_i = 0; r_i < n; ++r_i) {
    const auto r = static_cast<std::size_t>(r_i);
    float* dst = y.data() + r * out_dim;
    if (bias.empty()) {
      std::fill_n(dst, out_dim, 0.0f);
    } else {
      std::copy_n(bias.data(), out_dim, dst);
    }
    const float* src = x.data() + r * in;
    for (std::size_t i = 0; i < in; ++i) {
      const float a = src[i];
      const float* wrow = wt.data() + i * out_dim;
      for (std::size_t o = 0; o < out_dim; ++o) dst[o] += a * wrow[o];
    }
  }
  return y;
}

}  // namespace le2e
