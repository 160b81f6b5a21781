#include <algorithm>
#include <cmath>
#include <vector>

#include "checks.hpp"
#include "le2e/numerics.hpp"

namespace le2e {

Tensor multi_head_self_attention(const Tensor& x, const Tensor& wq, const Tensor& wk, const Tensor& wv,
                                 const Tensor& wo, std::size_t heads) {
  using detail::require;
  detail::require_rank(x, 2, "numerics", "attention input");
  const std::size_t len = x.dim(0), d = x.dim(1);
  require(heads >= 1 && d % heads == 0, "numerics",
          "attention width " + std::to_string(d) + " not divisible by " + std::to_string(heads) + " heads");
  for (const Tensor* w : {&wq, &wk, &wv, &wo}) {
    require(w->shape() == Shape{d, d}, "numerics",
            "attention projection must be [" + std::to_string(d) + "," + std::to_string(d) + "], got " +
                shape_to_string(w->shape()));
  }
  const Tensor none;
  const Tensor q = linear(x, wq, none);
  const Tensor kt = transpose2d(linear(x, wk, none));  // [D, T]
  const Tensor v = linear(x, wv, none);
  const std::size_t dh = d / heads;
  const float scale = 1.0f / std::sqrt(static_cast<float>(dh));

  Tensor context({len, d});
  const auto n = static_cast<std::ptrdiff_t>(len);
#pragma omp parallel
  {
    std::vector<float> scores(len);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i_i = 0; i_i < n; ++i_i) {
      const auto i = static_cast<std::size_t>(i_i);
      for (std::size_t h = 0; h < heads; ++h) {
        std::fill(scores.begin(), scores.end(), 0.0f);
        for (std::size_t c = h * dh; c < (h + 1) * dh; ++c) {
          const float qc = q.at(i, c);
          const float* krow = kt.data() + c * len;
          for (std::size_t j = 0; j < len; ++j) scores[j] += qc * krow[j];
        }
        float peak = -INFINITY;
        for (std::size_t j = 0; j < len; ++j) {
          scores[j] *= scale;
          peak = std::max(peak, scores[j]);
        }
        float total = 0.0f;
        for (std::size_t j = 0; j < len; ++j) {
          scores[j] = std::exp(scores[j] - peak);
          total += scores[j];
        }
        const float inv = 1.0f / total;
        float* dst = context.data() + i * d + h * dh;
        for (std::size_t j = 0; j < len; ++j) {
          const float p = scores[j] * inv;
          const float* vrow = v.data() + j * d + h * dh;
          for (std::size_t c = 0; c < dh; ++c) dst[c] += p * vrow[c];
        }
      }
    }
  }
  return linear(context, wo, none);
}

}  // namespace le2e
