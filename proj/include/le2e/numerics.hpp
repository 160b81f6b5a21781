#pragma once

// Tensor and DSP kernels. Everything here is a pure function of its inputs
// and safe to call concurrently. The OpenMP-parallel implementations live in
// namespace `le2e`; serial reference versions with identical contracts live
// in `le2e::reference` (see reference.hpp).

#include <cstddef>
#include <vector>

#include "le2e/tensor.hpp"

namespace le2e {

enum class Padding { Same, Valid };

// input [C_in, T], weight [C_out, C_in/groups, K], bias [C_out] (or empty).
// Correlation semantics (no kernel flip). "Same" pads dilation*(K-1) zeros,
// floor half on the left.
Tensor conv1d(const Tensor& input, const Tensor& weight, const Tensor& bias,
              std::size_t dilation = 1, std::size_t groups = 1,
              Padding padding = Padding::Same);

// input [C_in, T], weight [C_in, C_out, K], bias [C_out] (or empty).
// The full (T-1)*stride+K output is cropped symmetrically (floor half of
// K-stride on the left) to exactly T*stride samples.
Tensor conv_transpose1d(const Tensor& input, const Tensor& weight, const Tensor& bias,
                        std::size_t stride);

struct Conv2dGeometry {
  std::size_t stride_h = 1;
  std::size_t stride_w = 1;
  std::size_t pad_h = 0;
  std::size_t pad_w = 0;
};

// input [C_in, H, W], weight [C_out, C_in, KH, KW], bias [C_out]; zero padding.
Tensor conv2d(const Tensor& input, const Tensor& weight, const Tensor& bias,
              const Conv2dGeometry& geometry);

// x [T, in], weight [out, in], bias [out] (or empty) -> [T, out].
Tensor linear(const Tensor& x, const Tensor& weight, const Tensor& bias);

// Full (non-causal) scaled dot-product attention over the rows of x [T, D].
// Projections use the [out, in] convention: q = x * wq^T.
Tensor multi_head_self_attention(const Tensor& x, const Tensor& wq, const Tensor& wk,
                                 const Tensor& wv, const Tensor& wo, std::size_t heads);

// Normalizes over the last axis.
Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, float eps = 1e-5f);

void relu_inplace(Tensor& x);
void leaky_relu_inplace(Tensor& x, float slope);
void tanh_inplace(Tensor& x);

struct StftConfig {
  std::size_t fft_size = 1024;
  std::size_t hop_length = 256;
  std::size_t win_length = 1024;
  std::vector<float> window;  // length win_length

  // Periodic Hann window of win_length.
  static StftConfig hann(std::size_t fft_size, std::size_t hop_length, std::size_t win_length);
  void validate() const;
  std::size_t bins() const { return fft_size / 2 + 1; }
  std::size_t frames(std::size_t samples) const { return 1 + samples / hop_length; }
};

// Magnitude STFT of audio [T] -> [frames, fft_size/2+1] with
// frames = 1 + T/hop. The signal is reflect-padded by fft_size/2 on both
// sides; the window sits centered inside each fft_size frame.
Tensor stft(const Tensor& audio, const StftConfig& cfg);

inline constexpr float kLogFloor = 1e-5f;

struct MelFilterbank {
  std::size_t n_mels = 80;
  double sample_rate = 22050.0;
  double f_min = 0.0;
  double f_max = 8000.0;
  Tensor weights;  // [n_mels, fft_size/2+1]

  // Slaney mel scale with Slaney area normalization (librosa defaults).
  static MelFilterbank create(std::size_t n_mels, double sample_rate, std::size_t fft_size,
                              double f_min, double f_max);
};

// log(clamp(fb . |STFT|, 1e-5)) -> [frames, n_mels]
Tensor mel_spectrogram(const Tensor& audio, const StftConfig& cfg, const MelFilterbank& fb);

// Projects an existing magnitude spectrogram [frames, bins].
Tensor mel_from_magnitude(const Tensor& magnitude, const MelFilterbank& fb);

}  // namespace le2e
