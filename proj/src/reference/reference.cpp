#include "le2e/reference.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "../numerics/checks.hpp"
#include "../numerics/stft_detail.hpp"

namespace le2e::reference {

Tensor conv1d(const Tensor& input, const Tensor& weight, const Tensor& bias, std::size_t dilation,
              std::size_t groups, Padding padding) {
  using detail::require;
  detail::require_rank(input, 2, "numerics", "conv1d input");
  detail::require_rank(weight, 3, "numerics", "conv1d weight");
  const std::size_t cin = input.dim(0), len = input.dim(1);
  const std::size_t cout = weight.dim(0), cig = weight.dim(1), kernel = weight.dim(2);
  require(groups >= 1 && dilation >= 1 && cin % groups == 0 && cout % groups == 0 && cig == cin / groups,
          "numerics", "conv1d shape mismatch");
  const std::size_t span = dilation * (kernel - 1);
  std::ptrdiff_t left = 0;
  std::size_t out_len = len;
  if (padding == Padding::Same) {
    left = static_cast<std::ptrdiff_t>(span / 2);
  } else {
    require(len > span, "numerics", "conv1d valid padding needs input longer than the receptive field");
    out_len = len - span;
  }
  const std::size_t cog = cout / groups;
  Tensor out({cout, out_len});
  for (std::size_t co = 0; co < cout; ++co) {
    const std::size_t ci0 = (co / cog) * cig;
    for (std::size_t t = 0; t < out_len; ++t) {
      float acc = bias.empty() ? 0.0f : bias[co];
      for (std::size_t ci = 0; ci < cig; ++ci) {
        for (std::size_t k = 0; k < kernel; ++k) {
          const std::ptrdiff_t src =
              static_cast<std::ptrdiff_t>(t + k * dilation) - left;
          if (src < 0 || src >= static_cast<std::ptrdiff_t>(len)) continue;
          acc += weight[(co * cig + ci) * kernel + k] * input.at(ci0 + ci, static_cast<std::size_t>(src));
        }
      }
      out.at(co, t) = acc;
    }
  }
  return out;
}

Tensor conv_transpose1d(const Tensor& input, const Tensor& weight, const Tensor& bias, std::size_t stride) {
  using detail::require;
  detail::require_rank(input, 2, "numerics", "conv_transpose1d input");
  detail::require_rank(weight, 3, "numerics", "conv_transpose1d weight");
  const std::size_t cin = input.dim(0), len = input.dim(1);
  const std::size_t cout = weight.dim(1), kernel = weight.dim(2);
  require(stride >= 1 && weight.dim(0) == cin && kernel >= stride, "numerics",
          "conv_transpose1d shape mismatch");
  const std::size_t full = (len - 1) * stride + kernel;
  std::vector<float> acc(cout * full, 0.0f);
  for (std::size_t ci = 0; ci < cin; ++ci)
    for (std::size_t co = 0; co < cout; ++co)
      for (std::size_t t = 0; t < len; ++t)
        for (std::size_t k = 0; k < kernel; ++k)
          acc[co * full + t * stride + k] += input.at(ci, t) * weight[(ci * cout + co) * kernel + k];
  const std::size_t crop = (kernel - stride) / 2;
  Tensor out({cout, len * stride});
  for (std::size_t co = 0; co < cout; ++co)
    for (std::size_t n = 0; n < len * stride; ++n)
      out.at(co, n) = acc[co * full + crop + n] + (bias.empty() ? 0.0f : bias[co]);
  return out;
}

Tensor conv2d(const Tensor& input, const Tensor& weight, const Tensor& bias, const Conv2dGeometry& g) {
  detail::require_rank(input, 3, "numerics", "conv2d input");
  detail::require_rank(weight, 4, "numerics", "conv2d weight");
  const std::size_t cin = input.dim(0), h = input.dim(1), w = input.dim(2);
  const std::size_t cout = weight.dim(0), kh = weight.dim(2), kw = weight.dim(3);
  detail::require(weight.dim(1) == cin, "numerics", "conv2d shape mismatch");
  const std::size_t oh = (h + 2 * g.pad_h - kh) / g.stride_h + 1;
  const std::size_t ow = (w + 2 * g.pad_w - kw) / g.stride_w + 1;
  Tensor out({cout, oh, ow});
  for (std::size_t co = 0; co < cout; ++co)
    for (std::size_t y = 0; y < oh; ++y)
      for (std::size_t x = 0; x < ow; ++x) {
        float acc = bias.empty() ? 0.0f : bias[co];
        for (std::size_t ci = 0; ci < cin; ++ci)
          for (std::size_t ky = 0; ky < kh; ++ky)
            for (std::size_t kx = 0; kx < kw; ++kx) {
              const auto iy = static_cast<std::ptrdiff_t>(y * g.stride_h + ky) - static_cast<std::ptrdiff_t>(g.pad_h);
              const auto ix = static_cast<std::ptrdiff_t>(x * g.stride_w + kx) - static_cast<std::ptrdiff_t>(g.pad_w);
              if (iy < 0 || ix < 0 || iy >= static_cast<std::ptrdiff_t>(h) || ix >= static_cast<std::ptrdiff_t>(w)) continue;
              acc += weight[((co * cin + ci) * kh + ky) * kw + kx] *
                     input[(ci * h + static_cast<std::size_t>(iy)) * w + static_cast<std::size_t>(ix)];
            }
        out[(co * oh + y) * ow + x] = acc;
      }
  return out;
}

Tensor linear(const Tensor& x, const Tensor& weight, const Tensor& bias) {
  detail::require_rank(x, 2, "numerics", "linear input");
  detail::require_rank(weight, 2, "numerics", "linear weight");
  detail::require(weight.dim(1) == x.dim(1), "numerics", "linear shape mismatch");
  const std::size_t rows = x.dim(0), in = x.dim(1), out_dim = weight.dim(0);
  Tensor y({rows, out_dim});
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t o = 0; o < out_dim; ++o) {
      float acc = bias.empty() ? 0.0f : bias[o];
      for (std::size_t i = 0; i < in; ++i) acc += x.at(r, i) * weight.at(o, i);
      y.at(r, o) = acc;
    }
  return y;
}

Tensor multi_head_self_attention(const Tensor& x, const Tensor& wq, const Tensor& wk, const Tensor& wv,
                                 const Tensor& wo, std::size_t heads) {
  detail::require_rank(x, 2, "numerics", "attention input");
  const std::size_t len = x.dim(0), d = x.dim(1);
  detail::require(heads >= 1 && d % heads == 0, "numerics", "attention width not divisible by heads");
  const Tensor none;
  const Tensor q = reference::linear(x, wq, none), k = reference::linear(x, wk, none), v = reference::linear(x, wv, none);
  const std::size_t dh = d / heads;
  const float scale = 1.0f / std::sqrt(static_cast<float>(dh));
  Tensor context({len, d});
  std::vector<float> p(len);
  for (std::size_t h = 0; h < heads; ++h) {
    for (std::size_t i = 0; i < len; ++i) {
      float peak = -INFINITY;
      for (std::size_t j = 0; j < len; ++j) {
        float s = 0.0f;
        for (std::size_t c = h * dh; c < (h + 1) * dh; ++c) s += q.at(i, c) * k.at(j, c);
        p[j] = s * scale;
        peak = std::max(peak, p[j]);
      }
      float total = 0.0f;
      for (std::size_t j = 0; j < len; ++j) {
        p[j] = std::exp(p[j] - peak);
        total += p[j];
      }
      for (std::size_t c = h * dh; c < (h + 1) * dh; ++c) {
        float acc = 0.0f;
        for (std::size_t j = 0; j < len; ++j) acc += p[j] / total * v.at(j, c);
        context.at(i, c) = acc;
      }
    }
  }
  return reference::linear(context, wo, none);
}

Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, float eps) {
  const std::size_t d = x.shape().back();
  detail::require(gamma.shape() == Shape{d} && beta.shape() == Shape{d}, "numerics", "layer_norm shape mismatch");
  Tensor y(x.shape());
  for (std::size_t r = 0; r < x.size() / d; ++r) {
    double mean = 0.0, var = 0.0;
    for (std::size_t i = 0; i < d; ++i) mean += x[r * d + i];
    mean /= static_cast<double>(d);
    for (std::size_t i = 0; i < d; ++i) var += (x[r * d + i] - mean) * (x[r * d + i] - mean);
    var /= static_cast<double>(d);
    for (std::size_t i = 0; i < d; ++i)
      y[r * d + i] = static_cast<float>((x[r * d + i] - mean) / std::sqrt(var + eps)) * gamma[i] + beta[i];
  }
  return y;
}

Tensor stft(const Tensor& audio, const StftConfig& cfg) {
  detail::check_stft_input(audio, cfg);
  const std::size_t frames = cfg.frames(audio.size()), bins = cfg.bins(), n = cfg.fft_size;
  Tensor out({frames, bins});
  std::vector<double> frame(n);
  for (std::size_t f = 0; f < frames; ++f) {
    detail::fill_frame(audio, cfg, f, frame.data());
    for (std::size_t k = 0; k < bins; ++k) {
      std::complex<double> acc{};
      for (std::size_t i = 0; i < n; ++i) {
        const double a = -2.0 * std::numbers::pi * static_cast<double>(k * i % n) / static_cast<double>(n);
        acc += frame[i] * std::complex<double>(std::cos(a), std::sin(a));
      }
      out.at(f, k) = static_cast<float>(std::abs(acc));
    }
  }
  return out;
}

}  // namespace le2e::reference
