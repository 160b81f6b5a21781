#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "le2e/config.hpp"
#include "le2e/discriminators.hpp"
#include "le2e/numerics.hpp"
#include "le2e/pqmf.hpp"
#include "le2e/tensor.hpp"

namespace le2e {

// Loss kernels accumulate in double and return double.

double duration_loss(const Tensor& pred_log, const Tensor& oracle_log);

struct PitchQuantizer {
  std::size_t bins = 256;
  double mean = 0.0;  // Hz
  double std = 1.0;   // Hz
  double range = 4.0;

  void validate() const;
};

// floor(((f0 - mean)/std + range) / (2 range) * bins) clamped to [0, bins-1];
// f0 == 0 (unvoiced) maps to bin 0.
std::vector<std::size_t> pitch_quantize(const Tensor& f0, const PitchQuantizer& q);

// mean over frames of -log softmax(logits[t])[target[t]]
double pitch_ce_loss(const Tensor& logits, std::span<const std::size_t> targets);

// Means per score map, averaged over discriminators.
double lsgan_d_loss(std::span<const Tensor> real_scores, std::span<const Tensor> fake_scores);
double lsgan_g_loss(std::span<const Tensor> fake_scores);

using FeatureNest = std::vector<std::vector<Tensor>>;

// Sum over layers of mean |real - fake|, averaged over discriminators.
double feature_matching_loss(const FeatureNest& real, const FeatureNest& fake);

std::vector<Tensor> scores_of(const std::vector<DiscriminatorOutput>& outs);
FeatureNest features_of(const std::vector<DiscriminatorOutput>& outs);

// ||s - s_hat||_F / ||s||_F
double spectral_convergence(const Tensor& s, const Tensor& s_hat);
// mean |log max(s, 1e-5) - log max(s_hat, 1e-5)|
double stft_magnitude_loss(const Tensor& s, const Tensor& s_hat);

std::vector<StftConfig> full_band_resolutions(const MrdConfig& cfg);
// fft/hop/win divided by `subbands`, clamped to >= 32 / 8 / 32.
std::vector<StftConfig> sub_band_resolutions(const MrdConfig& cfg, std::size_t subbands);

// mean over resolutions of L_sc + L_mag
double mr_stft_loss(const Tensor& x, const Tensor& x_hat, std::span<const StftConfig> resolutions);

struct FullSubStft {
  double full = 0.0;
  double sub = 0.0;
  double combined = 0.0;
};

FullSubStft mr_stft_full_sub(const Tensor& x, const Tensor& x_hat, const PqmfBank& pqmf, const MrdConfig& cfg);

// mean |log-mel(x) - log-mel(x_hat)|
double mel_loss(const Tensor& x, const Tensor& x_hat, const StftConfig& cfg, const MelFilterbank& fb);

StftConfig mel_stft_config(const MelConfig& cfg);
MelFilterbank mel_filterbank(const MelConfig& cfg, double sample_rate);

struct LossReport {
  double dur = 0.0;
  double f0 = 0.0;
  double gan_g = 0.0;
  double gan_d = 0.0;
  double fm = 0.0;
  double mel = 0.0;
  double stft_full = 0.0;
  double stft_sub = 0.0;
  double total = 0.0;
};

// dur + f0 + gan_g + l_fm fm + l_mel mel + l_stft (stft_full + stft_sub)/2.
// gan_d is reported but not part of the generator total.
double total_generator_loss(const LossReport& r, const LossWeights& w);

}  // namespace le2e
