#pragma once

#include <span>
#include <string>
#include <vector>

#include "le2e/acoustic.hpp"
#include "le2e/config.hpp"
#include "le2e/layout.hpp"
#include "le2e/pqmf.hpp"
#include "le2e/tensor.hpp"

namespace le2e {

struct ResBlockWeights {
  Tensor dilated_weight;  // [C, C, res_kernel]
  Tensor dilated_bias;
  Tensor pointwise_weight;  // [C, C, 1]
  Tensor pointwise_bias;
};

struct UpsampleStageWeights {
  Tensor weight;  // [C_in, C_out, K]
  Tensor bias;
  std::vector<ResBlockWeights> blocks;
};

struct VocoderWeights {
  Tensor stem_weight;  // [stem, input_channels, stem_kernel]
  Tensor stem_bias;
  std::vector<UpsampleStageWeights> stages;
  Tensor out_weight;  // [subbands, last_channels, out_kernel]
  Tensor out_bias;

  static VocoderWeights load(WeightSource& src, const VocoderConfig& cfg);
  static VocoderWeights from_bundle(const WeightBundle& bundle, const VocoderConfig& cfg);
};

// Each block: x + conv_1(LReLU(conv_k,d(LReLU(x)))), one block per dilation.
Tensor residual_stack_forward(const Tensor& x, std::span<const ResBlockWeights> blocks,
                              std::span<const std::size_t> dilations, float slope);

// Multi-band generator followed by PQMF synthesis. Immutable after
// construction; forward() may be called concurrently.
class Vocoder {
 public:
  Vocoder(VocoderWeights weights, VocoderConfig cfg, const PqmfConfig& pqmf, std::size_t frame_hop = 300);
  Vocoder(const WeightBundle& bundle, const Config& cfg);

  // latent [T, input_channels] -> sub-band signals [subbands, T * hop / subbands]
  Tensor forward_subbands(const AcousticLatent& latent) const;
  // latent [T, input_channels] -> waveform [T * hop], clamped to [-1, 1]
  Tensor forward(const AcousticLatent& latent) const;

  const VocoderConfig& config() const noexcept { return cfg_; }
  const PqmfBank& pqmf() const noexcept { return pqmf_; }

 private:
  VocoderWeights weights_;
  VocoderConfig cfg_;
  PqmfBank pqmf_;
};

}  // namespace le2e
