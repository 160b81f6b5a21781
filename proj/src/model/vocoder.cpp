#include "le2e/vocoder.hpp"

#include <algorithm>

#include "le2e/error.hpp"
#include "le2e/numerics.hpp"

namespace le2e {

namespace {

constexpr const char* kModule = "vocoder";

}  // namespace

VocoderWeights VocoderWeights::load(WeightSource& src, const VocoderConfig& cfg) {
  VocoderWeights w;
  w.stem_weight = src.take("vocoder.stem.weight", {cfg.stem_channels, cfg.input_channels, cfg.stem_kernel});
  w.stem_bias = src.take("vocoder.stem.bias", {cfg.stem_channels});
  std::size_t channels = cfg.stem_channels;
  for (std::size_t s = 0; s < cfg.upsample_factors.size(); ++s) {
    const std::string p = "vocoder.stages." + std::to_string(s);
    const std::size_t out = cfg.up_channels[s];
    UpsampleStageWeights stage;
    stage.weight = src.take(p + ".up.weight", {channels, out, cfg.up_kernels[s]});
    stage.bias = src.take(p + ".up.bias", {out});
    for (std::size_t b = 0; b < cfg.resblocks_per_stage; ++b) {
      const std::string q = p + ".blocks." + std::to_string(b);
      ResBlockWeights blk;
      blk.dilated_weight = src.take(q + ".dilated.weight", {out, out, cfg.res_kernel});
      blk.dilated_bias = src.take(q + ".dilated.bias", {out});
      blk.pointwise_weight = src.take(q + ".pointwise.weight", {out, out, 1});
      blk.pointwise_bias = src.take(q + ".pointwise.bias", {out});
      stage.blocks.push_back(std::move(blk));
    }
    w.stages.push_back(std::move(stage));
    channels = out;
  }
  w.out_weight = src.take("vocoder.out.weight", {cfg.subbands, channels, cfg.out_kernel});
  w.out_bias = src.take("vocoder.out.bias", {cfg.subbands});
  return w;
}

VocoderWeights VocoderWeights::from_bundle(const WeightBundle& bundle, const VocoderConfig& cfg) {
  BundleSource src(bundle, kModule);
  VocoderWeights w = load(src, cfg);
  src.finish();
  return w;
}

Tensor residual_stack_forward(const Tensor& x, std::span<const ResBlockWeights> blocks,
                              std::span<const std::size_t> dilations, float slope) {
  if (blocks.size() != dilations.size()) {
    throw ConfigError(kModule, "residual stack has " + std::to_string(blocks.size()) + " blocks but " +
                                   std::to_string(dilations.size()) + " dilations");
  }
  Tensor h = x;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    Tensor a = h;
    leaky_relu_inplace(a, slope);
    a = conv1d(a, blocks[i].dilated_weight, blocks[i].dilated_bias, dilations[i]);
    leaky_relu_inplace(a, slope);
    a = conv1d(a, blocks[i].pointwise_weight, blocks[i].pointwise_bias);
    for (std::size_t j = 0; j < h.size(); ++j) h[j] += a[j];
  }
  return h;
}

Vocoder::Vocoder(VocoderWeights weights, VocoderConfig cfg, const PqmfConfig& pqmf, std::size_t frame_hop)
    : weights_(std::move(weights)), cfg_(std::move(cfg)), pqmf_(PqmfBank::design(pqmf)) {
  cfg_.validate(frame_hop);
  if (pqmf.subbands != cfg_.subbands) throw ConfigError(kModule, "PQMF and vocoder disagree on the band count");
  if (weights_.stages.size() != cfg_.upsample_factors.size()) {
    throw ConfigError(kModule, "stage count does not match the configuration");
  }
}

Vocoder::Vocoder(const WeightBundle& bundle, const Config& cfg)
    : Vocoder(VocoderWeights::from_bundle(bundle, cfg.vocoder), cfg.vocoder, cfg.pqmf, cfg.acoustic.frame_hop) {}

Tensor Vocoder::forward_subbands(const AcousticLatent& latent) const {
  const Tensor& f = latent.frames;
  if (f.rank() != 2 || f.dim(1) != cfg_.input_channels) {
    throw ConfigError(kModule, "latent must be [T, " + std::to_string(cfg_.input_channels) + "], got " +
                                   shape_to_string(f.shape()));
  }
  Tensor h = conv1d(transpose2d(f), weights_.stem_weight, weights_.stem_bias);
  for (std::size_t s = 0; s < weights_.stages.size(); ++s) {
    const auto& stage = weights_.stages[s];
    h = conv_transpose1d(h, stage.weight, stage.bias, cfg_.upsample_factors[s]);
    h = residual_stack_forward(h, stage.blocks, cfg_.res_dilations, cfg_.leaky_slope);
  }
  leaky_relu_inplace(h, cfg_.leaky_slope);
  h = conv1d(h, weights_.out_weight, weights_.out_bias);
  tanh_inplace(h);
  return h;
}

Tensor Vocoder::forward(const AcousticLatent& latent) const {
  Tensor y = pqmf_.synthesis(forward_subbands(latent));
  for (auto& v : y.storage()) v = std::clamp(v, -1.0f, 1.0f);
  return y;
}

}  // namespace le2e
