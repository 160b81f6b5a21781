#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace le2e {

// Acoustic latent model hyperparameters.
struct ModelConfig {
  std::size_t vocab_size = 256;
  std::size_t hidden = 256;
  std::size_t heads = 2;
  std::array<std::size_t, 4> encoder_kernels{5, 25, 13, 9};
  std::array<std::size_t, 4> decoder_kernels{17, 21, 9, 13};
  std::size_t duration_layers = 2;
  std::size_t duration_kernel = 3;
  std::size_t pitch_layers = 5;
  std::size_t pitch_kernel = 5;
  std::size_t pitch_bins = 256;
  std::size_t sample_rate = 22050;
  std::size_t frame_hop = 300;
  float layer_norm_eps = 1e-5f;

  void validate() const;
};

struct VocoderConfig {
  std::vector<std::size_t> upsample_factors{3, 5, 5};
  std::vector<std::size_t> up_channels{192, 96, 48};
  std::vector<std::size_t> up_kernels{6, 10, 10};
  std::size_t input_channels = 256;
  std::size_t stem_channels = 384;
  std::size_t stem_kernel = 7;
  std::size_t resblocks_per_stage = 4;
  std::vector<std::size_t> res_dilations{1, 3, 9, 27};
  std::size_t res_kernel = 3;
  float leaky_slope = 0.2f;
  std::size_t out_kernel = 7;
  std::size_t subbands = 4;

  // Samples produced per latent frame: product(upsample_factors) * subbands.
  std::size_t hop() const;
  void validate(std::size_t frame_hop) const;
};

// Kaiser beta minimizing the power-complementarity error of the 62-tap,
// 0.1492-cutoff prototype (see pqmf.hpp). Beta values 0.9 and 9.0
// reconstruct at roughly 8 dB and 20 dB SNR with this cutoff.
inline constexpr double kPqmfDefaultBeta = 18.2;

struct PqmfConfig {
  std::size_t subbands = 4;
  std::size_t taps = 62;
  double cutoff = 0.1492;
  double beta = kPqmfDefaultBeta;

  void validate() const;
};

enum class Activation { Relu, LeakyRelu };

struct MpdConfig {
  std::vector<std::size_t> periods{2, 3, 5, 7, 11};
  std::size_t base_channels = 32;
  Activation activation = Activation::Relu;

  void validate() const;
};

struct MrdConfig {
  std::vector<std::size_t> fft_sizes{1024, 2048, 512};
  std::vector<std::size_t> hop_lengths{120, 240, 50};
  std::vector<std::size_t> win_lengths{600, 1200, 240};
  std::size_t base_channels = 32;
  Activation activation = Activation::Relu;

  std::size_t resolutions() const { return fft_sizes.size(); }
  void validate() const;
};

struct MelConfig {
  std::size_t n_mels = 80;
  std::size_t fft_size = 1024;
  std::size_t hop_length = 256;
  std::size_t win_length = 1024;
  double f_min = 0.0;
  double f_max = 8000.0;
};

struct LossWeights {
  double lambda_fm = 2.0;
  double lambda_mel = 5.0;
  double lambda_stft = 2.5;

  void validate() const;
};

struct Config {
  ModelConfig acoustic;
  VocoderConfig vocoder;
  PqmfConfig pqmf;
  MpdConfig mpd;
  MrdConfig mrd;
  MelConfig mel;
  LossWeights loss;
  double pitch_range = 4.0;  // standardized units covered by the pitch bins

  void validate() const;

  // Reduced widths (hidden 16, vocoder channels 8/8/4) with the full
  // topology, for fast tests.
  static Config tiny();

  static Config from_json_text(const std::string& text);
  static Config load(const std::string& path);
  std::string to_json_text() const;
};

}  // namespace le2e
