#include <algorithm>
#include <vector>

#include "checks.hpp"
#include "le2e/numerics.hpp"

namespace le2e {

Tensor conv2d(const Tensor& input, const Tensor& weight, const Tensor& bias, const Conv2dGeometry& g) {
  using detail::require;
  detail::require_rank(input, 3, "numerics", "conv2d input");
  detail::require_rank(weight, 4, "numerics", "conv2d weight");
  const std::size_t cin = input.dim(0), h = input.dim(1), w = input.dim(2);
  const std::size_t cout = weight.dim(0), kh = weight.dim(2), kw = weight.dim(3);
  require(weight.dim(1) == cin, "numerics",
          "conv2d weight " + shape_to_string(weight.shape()) + " does not match input channels " +
              std::to_string(cin));
  require(g.stride_h >= 1 && g.stride_w >= 1, "numerics", "conv2d strides must be >= 1");
  require(bias.empty() || bias.shape() == Shape{cout}, "numerics", "conv2d bias must be [C_out]");
  const std::size_t hp = h + 2 * g.pad_h, wp = w + 2 * g.pad_w;
  require(hp >= kh && wp >= kw, "numerics", "conv2d kernel larger than padded input");
  const std::size_t oh = (hp - kh) / g.stride_h + 1, ow = (wp - kw) / g.stride_w + 1;

  std::vector<float> xp(cin * hp * wp, 0.0f);
  for (std::size_t c = 0; c < cin; ++c)
    for (std::size_t y = 0; y < h; ++y)
      std::copy_n(input.data() + (c * h + y) * w, w, xp.data() + (c * hp + y + g.pad_h) * wp + g.pad_w);

  Tensor out({cout, oh, ow});
  const auto n_out = static_cast<std::ptrdiff_t>(cout);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t co_i = 0; co_i < n_out; ++co_i) {
    const auto co = static_cast<std::size_t>(co_i);
    float* acc = out.data() + co * oh * ow;
    std::fill_n(acc, oh * ow, bias.empty() ? 0.0f : bias[co]);
    for (std::size_t ci = 0; ci < cin; ++ci) {
      for (std::size_t ky = 0; ky < kh; ++ky) {
        for (std::size_t kx = 0; kx < kw; ++kx) {
          const float wv = weight[((co * cin + ci) * kh + ky) * kw + kx];
          for (std::size_t y = 0; y < oh; ++y) {
            const float* src = xp.data() + (ci * hp + y * g.stride_h + ky) * wp + kx;
            float* dst = acc + y * ow;
            if (g.stride_w == 1) {
              for (std::size_t x = 0; x < ow; ++x) dst[x] += wv * src[x];
            } else {
              for (std::size_t x = 0; x < ow; ++x) dst[x] += wv * src[x * g.stride_w];
            }
          }
        }
      }
    }
  }
  return out;
}

}  // namespace le2e
