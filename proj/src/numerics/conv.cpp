#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "checks.hpp"
#include "le2e/numerics.hpp"

namespace le2e {

namespace {

constexpr std::size_t kTile = 256;

// Accumulates B output channels over one group's input channels. Every
// output element is reduced in the same (bias, ci, k) order regardless of
// how blocks are distributed across threads.
template <std::size_t B>
void conv1d_block(const float* xp, std::size_t padded_len, const float* weight, std::size_t cig,
                  std::size_t kernel, std::size_t dilation, const float* bias, std::size_t co0,
                  std::size_t ci0, std::size_t out_len, float* out) {
  alignas(64) float acc[B][kTile];
  for (std::size_t t0 = 0; t0 < out_len; t0 += kTile) {
    const std::size_t len = std::min(kTile, out_len - t0);
    for (std::size_t b = 0; b < B; ++b) {
      const float init = bias ? bias[co0 + b] : 0.0f;
      std::fill_n(acc[b], len, init);
    }
    for (std::size_t ci = 0; ci < cig; ++ci) {
      const float* src_row = xp + (ci0 + ci) * padded_len + t0;
      for (std::size_t k = 0; k < kernel; ++k) {
        const float* src = src_row + k * dilation;
        float w[B];
        for (std::size_t b = 0; b < B; ++b) w[b] = weight[((co0 + b) * cig + ci) * kernel + k];
        for (std::size_t t = 0; t < len; ++t) {
          const float s = src[t];
          for (std::size_t b = 0; b < B; ++b) acc[b][t] += w[b] * s;
        }
      }
    }
    for (std::size_t b = 0; b < B; ++b) std::copy_n(acc[b], len, out + (co0 + b) * out_len + t0);
  }
}

}  // namespace

Tensor conv1d(const Tensor& input, const Tensor& weight, const Tensor& bias, std::size_t dilation,
              std::size_t groups, Padding padding) {
  using detail::require;
  detail::require_rank(input, 2, "numerics", "conv1d input");
  detail::require_rank(weight, 3, "numerics", "conv1d weight");
  require(groups >= 1 && dilation >= 1, "numerics", "conv1d needs groups >= 1 and dilation >= 1");
  const std::size_t cin = input.dim(0), len = input.dim(1);
  const std::size_t cout = weight.dim(0), cig = weight.dim(1), kernel = weight.dim(2);
  require(cin % groups == 0 && cout % groups == 0, "numerics",
          "conv1d channels " + std::to_string(cin) + "->" + std::to_string(cout) +
              " not divisible by groups " + std::to_string(groups));
  require(cig == cin / groups, "numerics",
          "conv1d weight " + shape_to_string(weight.shape()) + " does not match input channels " +
              std::to_string(cin) + " / groups " + std::to_string(groups));
  require(bias.empty() || bias.shape() == Shape{cout}, "numerics",
          "conv1d bias must be [" + std::to_string(cout) + "]");

  const std::size_t span = dilation * (kernel - 1);
  std::size_t left = 0, right = 0, out_len = len;
  if (padding == Padding::Same) {
    left = span / 2;
    right = span - left;
  } else {
    require(len > span, "numerics", "conv1d valid padding needs input longer than the receptive field");
    out_len = len - span;
  }
  const std::size_t padded_len = len + left + right;
  std::vector<float> xp(cin * padded_len, 0.0f);
  for (std::size_t c = 0; c < cin; ++c)
    std::copy_n(input.data() + c * len, len, xp.data() + c * padded_len + left);

  Tensor out({cout, out_len});
  const std::size_t cog = cout / groups;
  const float* b = bias.empty() ? nullptr : bias.data();
  if (cog % 4 == 0) {
    const auto blocks = static_cast<std::ptrdiff_t>(cout / 4);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t blk = 0; blk < blocks; ++blk) {
      const std::size_t co0 = static_cast<std::size_t>(blk) * 4;
      conv1d_block<4>(xp.data(), padded_len, weight.data(), cig, kernel, dilation, b, co0,
                      (co0 / cog) * cig, out_len, out.data());
    }
  } else {
    const auto blocks = static_cast<std::ptrdiff_t>(cout);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t co = 0; co < blocks; ++co) {
      const auto c = static_cast<std::size_t>(co);
      conv1d_block<1>(xp.data(), padded_len, weight.data(), cig, kernel, dilation, b, c,
                      (c / cog) * cig, out_len, out.data());
    }
  }
  return out;
}

namespace {

struct PhaseTap {
  std::size_t k;
  std::ptrdiff_t shift;  // input index = m + shift
};

template <std::size_t B>
void conv_transpose_block(const Tensor& input, const Tensor& weight, const float* bias, std::size_t co0,
                          std::size_t stride, const std::vector<std::vector<PhaseTap>>& phases,
                          float* out) {
  const std::size_t cin = input.dim(0), len = input.dim(1);
  const std::size_t cout = weight.dim(1), kernel = weight.dim(2);
  const auto slen = static_cast<std::ptrdiff_t>(len);
  alignas(64) float acc[B][kTile];
  for (std::size_t r = 0; r < stride; ++r) {
    for (std::size_t m0 = 0; m0 < len; m0 += kTile) {
      const std::size_t n = std::min(kTile, len - m0);
      for (std::size_t b = 0; b < B; ++b) std::fill_n(acc[b], n, bias ? bias[co0 + b] : 0.0f);
      for (std::size_t ci = 0; ci < cin; ++ci) {
        const float* src = input.data() + ci * len;
        for (const auto& tap : phases[r]) {
          const auto lo = std::max<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(m0), -tap.shift);
          const auto hi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(m0 + n), slen - tap.shift);
          if (lo >= hi) continue;
          float w[B];
          for (std::size_t b = 0; b < B; ++b) w[b] = weight[(ci * cout + co0 + b) * kernel + tap.k];
          for (std::ptrdiff_t m = lo; m < hi; ++m) {
            const float s = src[m + tap.shift];
            const auto j = static_cast<std::size_t>(m) - m0;
            for (std::size_t b = 0; b < B; ++b) acc[b][j] += w[b] * s;
          }
        }
      }
      for (std::size_t b = 0; b < B; ++b) {
        float* dst = out + (co0 + b) * len * stride;
        for (std::size_t j = 0; j < n; ++j) dst[(m0 + j) * stride + r] = acc[b][j];
      }
    }
  }
}

}  // namespace

Tensor conv_transpose1d(const Tensor& input, const Tensor& weight, const Tensor& bias,
                        std::size_t stride) {
  using detail::require;
  detail::require_rank(input, 2, "numerics", "conv_transpose1d input");
  detail::require_rank(weight, 3, "numerics", "conv_transpose1d weight");
  require(stride >= 1, "numerics", "conv_transpose1d stride must be >= 1");
  const std::size_t cin = input.dim(0), len = input.dim(1);
  const std::size_t cout = weight.dim(1), kernel = weight.dim(2);
  require(weight.dim(0) == cin, "numerics",
          "conv_transpose1d weight " + shape_to_string(weight.shape()) + " does not match input channels " +
              std::to_string(cin));
  require(kernel >= stride, "numerics",
          "conv_transpose1d kernel " + std::to_string(kernel) + " shorter than stride " +
              std::to_string(stride) + " leaves gaps");
  require(bias.empty() || bias.shape() == Shape{cout}, "numerics",
          "conv_transpose1d bias must be [" + std::to_string(cout) + "]");

  // Polyphase form: output sample m*stride + r collects taps k with
  // (r + crop_left - k) divisible by stride.
  const auto crop_left = static_cast<std::ptrdiff_t>((kernel - stride) / 2);
  const auto s = static_cast<std::ptrdiff_t>(stride);
  std::vector<std::vector<PhaseTap>> phases(stride);
  for (std::size_t r = 0; r < stride; ++r) {
    for (std::size_t k = 0; k < kernel; ++k) {
      const std::ptrdiff_t off = static_cast<std::ptrdiff_t>(r) + crop_left - static_cast<std::ptrdiff_t>(k);
      if (((off % s) + s) % s == 0) phases[r].push_back({k, off / s});
    }
  }

  Tensor out({cout, len * stride});
  const float* b = bias.empty() ? nullptr : bias.data();
  if (cout % 4 == 0) {
    const auto blocks = static_cast<std::ptrdiff_t>(cout / 4);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t blk = 0; blk < blocks; ++blk)
      conv_transpose_block<4>(input, weight, b, static_cast<std::size_t>(blk) * 4, stride, phases, out.data());
  } else {
    const auto blocks = static_cast<std::ptrdiff_t>(cout);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t co = 0; co < blocks; ++co)
      conv_transpose_block<1>(input, weight, b, static_cast<std::size_t>(co), stride, phases, out.data());
  }
  return out;
}

void relu_inplace(Tensor& x) {
  for (auto& v : x.values()) v = v > 0.0f ? v : 0.0f;
}

void leaky_relu_inplace(Tensor& x, float slope) {
  for (auto& v : x.values()) v = v > 0.0f ? v : v * slope;
}

void tanh_inplace(Tensor& x) {
  for (auto& v : x.values()) v = std::tanh(v);
}

}  // namespace le2e
