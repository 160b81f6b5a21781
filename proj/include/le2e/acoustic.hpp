#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "le2e/config.hpp"
#include "le2e/layout.hpp"
#include "le2e/tensor.hpp"

namespace le2e {

struct PhonemeSequence {
  std::vector<std::size_t> ids;
};

struct DurationSequence {
  std::vector<std::size_t> frames;

  std::size_t total() const;
};

struct AcousticLatent {
  Tensor frames;  // [T, hidden]

  std::size_t length() const { return frames.empty() ? 0 : frames.dim(0); }
};

struct SeparableConvWeights {
  Tensor depthwise_weight;  // [C, 1, K]
  Tensor depthwise_bias;    // [C]
  Tensor pointwise_weight;  // [C_out, C]
  Tensor pointwise_bias;    // [C_out]

  static SeparableConvWeights load(WeightSource& src, const std::string& prefix, std::size_t channels,
                                   std::size_t out_channels, std::size_t kernel);
};

struct LayerNormWeights {
  Tensor gamma;
  Tensor beta;

  static LayerNormWeights load(WeightSource& src, const std::string& prefix, std::size_t width);
};

struct TransformerBlockWeights {
  Tensor wq, wk, wv, wo;  // [D, D], [out, in]
  LayerNormWeights attn_norm;
  SeparableConvWeights conv;
  LayerNormWeights conv_norm;

  static TransformerBlockWeights load(WeightSource& src, const std::string& prefix, std::size_t hidden,
                                      std::size_t kernel);
};

struct PredictorLayerWeights {
  SeparableConvWeights conv;
  LayerNormWeights norm;
};

struct DurationPredictorWeights {
  std::vector<PredictorLayerWeights> layers;
  Tensor proj_weight;  // [1, hidden]
  Tensor proj_bias;    // [1]
};

struct PitchPredictorWeights {
  std::vector<PredictorLayerWeights> layers;
  Tensor proj_weight;  // [bins, hidden]
  Tensor proj_bias;    // [bins]
};

struct AcousticWeights {
  Tensor embedding;  // [vocab, hidden]
  std::vector<TransformerBlockWeights> encoder;
  DurationPredictorWeights duration;
  PitchPredictorWeights pitch;
  std::vector<TransformerBlockWeights> decoder;

  static AcousticWeights load(WeightSource& src, const ModelConfig& cfg);
  static AcousticWeights from_bundle(const WeightBundle& bundle, const ModelConfig& cfg);
};

// Sinusoidal position code: [2j] = sin(pos / 10000^(2j/D)), [2j+1] = cos(...).
std::vector<float> sinusoidal_position(std::size_t position, std::size_t width);

// row i = embedding[ids[i]] + sinusoidal_position(i)
Tensor embed_phonemes(const PhonemeSequence& seq, const Tensor& embedding);

// x [T, C] -> depthwise conv over time -> pointwise -> [T, C_out]; no activation.
Tensor separable_conv(const Tensor& x, const SeparableConvWeights& w);

// Post-norm blocks: x = LN(x + MHSA(x)); x = LN(x + ReLU(SepConv_k(x))).
Tensor transformer_stack_forward(const Tensor& x, std::span<const TransformerBlockWeights> blocks,
                                 std::span<const std::size_t> kernels, std::size_t heads, float eps = 1e-5f);

// Log-scale per-phoneme durations [N].
Tensor predict_durations(const Tensor& encoded, const DurationPredictorWeights& w, float eps = 1e-5f);

// frames = max(0, round(exp(d) - 1))
DurationSequence decode_durations(const Tensor& log_durations);

// Repeats row i durations[i] times.
Tensor length_regulate(const Tensor& encoded, const DurationSequence& durations);

struct PitchOutput {
  Tensor logits;    // [T, bins]
  Tensor latents;   // [T, hidden], pre-projection features
  Tensor enriched;  // upsampled + latents
};

PitchOutput pitch_forward(const Tensor& upsampled, const PitchPredictorWeights& w, float eps = 1e-5f);

struct AcousticOutput {
  AcousticLatent latent;
  Tensor log_durations;  // [N]
  DurationSequence durations;
  Tensor pitch_logits;  // [T, 256]
};

// Text encoder -> variance adaptor -> acoustic decoder. Immutable after
// construction; forward() may be called concurrently.
class AcousticModel {
 public:
  AcousticModel(AcousticWeights weights, ModelConfig cfg);
  AcousticModel(const WeightBundle& bundle, const ModelConfig& cfg);

  AcousticOutput forward(const PhonemeSequence& seq,
                         const std::optional<DurationSequence>& durations_override = std::nullopt) const;

  const ModelConfig& config() const noexcept { return cfg_; }
  const AcousticWeights& weights() const noexcept { return weights_; }

 private:
  AcousticWeights weights_;
  ModelConfig cfg_;
};

}  // namespace le2e
