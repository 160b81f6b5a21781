#include "le2e/acoustic.hpp"

#include <cmath>

#include "le2e/error.hpp"
#include "le2e/numerics.hpp"

namespace le2e {

namespace {

constexpr const char* kModule = "acoustic_model";

std::string idx(const std::string& prefix, std::size_t i) { return prefix + "." + std::to_string(i); }

std::vector<PredictorLayerWeights> load_predictor_layers(WeightSource& src, const std::string& prefix,
                                                         std::size_t layers, std::size_t hidden,
                                                         std::size_t kernel) {
  std::vector<PredictorLayerWeights> out;
  for (std::size_t i = 0; i < layers; ++i) {
    const std::string p = idx(prefix + ".layers", i);
    out.push_back({SeparableConvWeights::load(src, p + ".conv", hidden, hidden, kernel),
                   LayerNormWeights::load(src, p + ".norm", hidden)});
  }
  return out;
}

// sepconv -> ReLU -> LN per layer
Tensor predictor_trunk(const Tensor& x, const std::vector<PredictorLayerWeights>& layers, float eps) {
  Tensor h = x;
  for (const auto& layer : layers) {
    h = separable_conv(h, layer.conv);
    relu_inplace(h);
    h = layer_norm(h, layer.norm.gamma, layer.norm.beta, eps);
  }
  return h;
}

void add_inplace(Tensor& a, const Tensor& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
}

}  // namespace

std::size_t DurationSequence::total() const {
  std::size_t n = 0;
  for (auto f : frames) n += f;
  return n;
}

SeparableConvWeights SeparableConvWeights::load(WeightSource& src, const std::string& prefix, std::size_t channels,
                                                std::size_t out_channels, std::size_t kernel) {
  SeparableConvWeights w;
  w.depthwise_weight = src.take(prefix + ".depthwise.weight", {channels, 1, kernel});
  w.depthwise_bias = src.take(prefix + ".depthwise.bias", {channels});
  w.pointwise_weight = src.take(prefix + ".pointwise.weight", {out_channels, channels});
  w.pointwise_bias = src.take(prefix + ".pointwise.bias", {out_channels});
  return w;
}

LayerNormWeights LayerNormWeights::load(WeightSource& src, const std::string& prefix, std::size_t width) {
  return {src.take(prefix + ".gamma", {width}), src.take(prefix + ".beta", {width})};
}

TransformerBlockWeights TransformerBlockWeights::load(WeightSource& src, const std::string& prefix,
                                                      std::size_t hidden, std::size_t kernel) {
  TransformerBlockWeights w;
  w.wq = src.take(prefix + ".attn.wq", {hidden, hidden});
  w.wk = src.take(prefix + ".attn.wk", {hidden, hidden});
  w.wv = src.take(prefix + ".attn.wv", {hidden, hidden});
  w.wo = src.take(prefix + ".attn.wo", {hidden, hidden});
  w.attn_norm = LayerNormWeights::load(src, prefix + ".attn_norm", hidden);
  w.conv = SeparableConvWeights::load(src, prefix + ".conv", hidden, hidden, kernel);
  w.conv_norm = LayerNormWeights::load(src, prefix + ".conv_norm", hidden);
  return w;
}

AcousticWeights AcousticWeights::load(WeightSource& src, const ModelConfig& cfg) {
  cfg.validate();
  const std::size_t h = cfg.hidden;
  AcousticWeights w;
  w.embedding = src.take("encoder.embedding", {cfg.vocab_size, h});
  for (std::size_t i = 0; i < cfg.encoder_kernels.size(); ++i) {
    w.encoder.push_back(TransformerBlockWeights::load(src, idx("encoder.blocks", i), h, cfg.encoder_kernels[i]));
  }
  w.duration.layers = load_predictor_layers(src, "variance.duration", cfg.duration_layers, h, cfg.duration_kernel);
  w.duration.proj_weight = src.take("variance.duration.proj.weight", {1, h});
  w.duration.proj_bias = src.take("variance.duration.proj.bias", {1});
  w.pitch.layers = load_predictor_layers(src, "variance.pitch", cfg.pitch_layers, h, cfg.pitch_kernel);
  w.pitch.proj_weight = src.take("variance.pitch.proj.weight", {cfg.pitch_bins, h});
  w.pitch.proj_bias = src.take("variance.pitch.proj.bias", {cfg.pitch_bins});
  for (std::size_t i = 0; i < cfg.decoder_kernels.size(); ++i) {
    w.decoder.push_back(TransformerBlockWeights::load(src, idx("decoder.blocks", i), h, cfg.decoder_kernels[i]));
  }
  return w;
}

AcousticWeights AcousticWeights::from_bundle(const WeightBundle& bundle, const ModelConfig& cfg) {
  BundleSource src(bundle, kModule);
  AcousticWeights w = load(src, cfg);
  src.finish();
  return w;
}

std::vector<float> sinusoidal_position(std::size_t position, std::size_t width) {
  std::vector<float> out(width);
  const double pos = static_cast<double>(position);
  for (std::size_t c = 0; c < width; c += 2) {
    const double rate = std::pow(10000.0, static_cast<double>(c) / static_cast<double>(width));
    out[c] = static_cast<float>(std::sin(pos / rate));
    if (c + 1 < width) out[c + 1] = static_cast<float>(std::cos(pos / rate));
  }
  return out;
}

Tensor embed_phonemes(const PhonemeSequence& seq, const Tensor& embedding) {
  if (embedding.rank() != 2) throw ConfigError(kModule, "embedding table must be rank 2");
  if (seq.ids.empty()) throw InputError(kModule, "phoneme sequence is empty");
  const std::size_t vocab = embedding.dim(0);
  const std::size_t width = embedding.dim(1);
  Tensor out({seq.ids.size(), width});
  for (std::size_t i = 0; i < seq.ids.size(); ++i) {
    const std::size_t id = seq.ids[i];
    if (id >= vocab) {
      throw InputError(kModule, "phoneme id " + std::to_string(id) + " at position " + std::to_string(i) +
                                    " is outside the vocabulary of " + std::to_string(vocab));
    }
    const auto pos = sinusoidal_position(i, width);
    auto dst = out.row(i);
    auto src = embedding.row(id);
    for (std::size_t c = 0; c < width; ++c) dst[c] = src[c] + pos[c];
  }
  return out;
}

Tensor separable_conv(const Tensor& x, const SeparableConvWeights& w) {
  if (x.rank() != 2) throw ConfigError(kModule, "separable conv input must be [T, C]");
  const std::size_t channels = x.dim(1);
  Tensor ct = transpose2d(x);
  Tensor dw = conv1d(ct, w.depthwise_weight, w.depthwise_bias, 1, channels, Padding::Same);
  return linear(transpose2d(dw), w.pointwise_weight, w.pointwise_bias);
}

Tensor transformer_stack_forward(const Tensor& x, std::span<const TransformerBlockWeights> blocks,
                                 std::span<const std::size_t> kernels, std::size_t heads, float eps) {
  if (blocks.size() != kernels.size()) {
    throw ConfigError(kModule, "transformer stack has " + std::to_string(blocks.size()) + " blocks but " +
                                   std::to_string(kernels.size()) + " kernel sizes");
  }
  Tensor h = x;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    if (b.conv.depthwise_weight.rank() != 3 || b.conv.depthwise_weight.dim(2) != kernels[i]) {
      throw ConfigError(kModule, "block " + std::to_string(i) + " kernel does not match " + std::to_string(kernels[i]));
    }
    Tensor a = multi_head_self_attention(h, b.wq, b.wk, b.wv, b.wo, heads);
    add_inplace(a, h);
    h = layer_norm(a, b.attn_norm.gamma, b.attn_norm.beta, eps);
    Tensor f = separable_conv(h, b.conv);
    relu_inplace(f);
    add_inplace(f, h);
    h = layer_norm(f, b.conv_norm.gamma, b.conv_norm.beta, eps);
  }
  return h;
}

Tensor predict_durations(const Tensor& encoded, const DurationPredictorWeights& w, float eps) {
  Tensor h = predictor_trunk(encoded, w.layers, eps);
  Tensor d = linear(h, w.proj_weight, w.proj_bias);
  return d.reshaped({d.dim(0)});
}

DurationSequence decode_durations(const Tensor& log_durations) {
  DurationSequence out;
  out.frames.reserve(log_durations.size());
  for (float d : log_durations.values()) {
    const double f = std::round(std::exp(static_cast<double>(d)) - 1.0);
    if (!std::isfinite(f)) throw InputError(kModule, "non-finite duration prediction");
    out.frames.push_back(f > 0.0 ? static_cast<std::size_t>(f) : 0);
  }
  return out;
}

Tensor length_regulate(const Tensor& encoded, const DurationSequence& durations) {
  if (encoded.rank() != 2) throw ConfigError(kModule, "length regulator input must be [N, C]");
  if (durations.frames.size() != encoded.dim(0)) {
    throw InputError(kModule, "got " + std::to_string(durations.frames.size()) + " durations for " +
                                  std::to_string(encoded.dim(0)) + " phonemes");
  }
  const std::size_t total = durations.total();
  if (total == 0) throw InputError(kModule, "all durations are zero (empty utterance)");
  const std::size_t width = encoded.dim(1);
  Tensor out({total, width});
  std::size_t t = 0;
  for (std::size_t i = 0; i < durations.frames.size(); ++i) {
    auto src = encoded.row(i);
    for (std::size_t r = 0; r < durations.frames[i]; ++r, ++t) {
      std::copy(src.begin(), src.end(), out.row(t).begin());
    }
  }
  return out;
}

PitchOutput pitch_forward(const Tensor& upsampled, const PitchPredictorWeights& w, float eps) {
  PitchOutput out;
  out.latents = predictor_trunk(upsampled, w.layers, eps);
  out.logits = linear(out.latents, w.proj_weight, w.proj_bias);
  out.enriched = upsampled;
  add_inplace(out.enriched, out.latents);
  return out;
}

AcousticModel::AcousticModel(AcousticWeights weights, ModelConfig cfg) : weights_(std::move(weights)), cfg_(cfg) {
  cfg_.validate();
  if (weights_.encoder.size() != cfg_.encoder_kernels.size() ||
      weights_.decoder.size() != cfg_.decoder_kernels.size()) {
    throw ConfigError(kModule, "block count does not match the configuration");
  }
}

AcousticModel::AcousticModel(const WeightBundle& bundle, const ModelConfig& cfg)
    : AcousticModel(AcousticWeights::from_bundle(bundle, cfg), cfg) {}

AcousticOutput AcousticModel::forward(const PhonemeSequence& seq,
                                      const std::optional<DurationSequence>& durations_override) const {
  const float eps = cfg_.layer_norm_eps;
  Tensor x = embed_phonemes(seq, weights_.embedding);
  Tensor enc = transformer_stack_forward(x, weights_.encoder, cfg_.encoder_kernels, cfg_.heads, eps);

  AcousticOutput out;
  out.log_durations = predict_durations(enc, weights_.duration, eps);
  out.durations = durations_override ? *durations_override : decode_durations(out.log_durations);

  Tensor up = length_regulate(enc, out.durations);
  PitchOutput pitch = pitch_forward(up, weights_.pitch, eps);
  out.pitch_logits = std::move(pitch.logits);
  out.latent.frames =
      transformer_stack_forward(pitch.enriched, weights_.decoder, cfg_.decoder_kernels, cfg_.heads, eps);
  return out;
}

}  // namespace le2e
