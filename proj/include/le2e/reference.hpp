#pragma once

// Serial, unoptimized kernels with the same contracts as numerics.hpp. They
// exist to cross-check the parallel kernels and as the benchmark baseline.

#include "le2e/numerics.hpp"

namespace le2e::reference {

Tensor conv1d(const Tensor& input, const Tensor& weight, const Tensor& bias,
              std::size_t dilation = 1, std::size_t groups = 1,
              Padding padding = Padding::Same);
Tensor conv_transpose1d(const Tensor& input, const Tensor& weight, const Tensor& bias,
                        std::size_t stride);
Tensor conv2d(const Tensor& input, const Tensor& weight, const Tensor& bias,
              const Conv2dGeometry& geometry);
Tensor linear(const Tensor& x, const Tensor& weight, const Tensor& bias);
Tensor multi_head_self_attention(const Tensor& x, const Tensor& wq, const Tensor& wk,
                                 const Tensor& wv, const Tensor& wo, std::size_t heads);
Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, float eps = 1e-5f);

// Direct DFT per frame, O(fft_size^2).
Tensor stft(const Tensor& audio, const StftConfig& cfg);

}  // namespace le2e::reference
