#include "le2e/discriminators.hpp"

#include <algorithm>

#include "../numerics/checks.hpp"
#include "le2e/error.hpp"

namespace le2e {

namespace {

constexpr const char* kModule = "discriminators";

Conv2dLayer load_layer(WeightSource& src, const std::string& prefix, std::size_t cin, std::size_t cout,
                       std::size_t kh, std::size_t kw, Conv2dGeometry geometry) {
  return {src.take(prefix + ".weight", {cout, cin, kh, kw}), src.take(prefix + ".bias", {cout}), geometry};
}

void activate(Tensor& x, Activation act) {
  if (act == Activation::Relu) {
    relu_inplace(x);
  } else {
    leaky_relu_inplace(x, 0.1f);
  }
}

DiscriminatorOutput run_stack(Tensor x, const SubDiscriminatorWeights& w, Activation act) {
  DiscriminatorOutput out;
  for (const auto& layer : w.layers) {
    x = conv2d(x, layer.weight, layer.bias, layer.geometry);
    activate(x, act);
    out.features.push_back(x);
  }
  out.score = conv2d(x, w.post.weight, w.post.bias, w.post.geometry);
  out.features.push_back(out.score);
  return out;
}

}  // namespace

MpdWeights MpdWeights::load(WeightSource& src, const MpdConfig& cfg) {
  cfg.validate();
  const std::size_t b = cfg.base_channels;
  const std::vector<std::size_t> channels{b, 4 * b, 16 * b, 32 * b, 32 * b};
  MpdWeights w;
  for (std::size_t p = 0; p < cfg.periods.size(); ++p) {
    const std::string prefix = "mpd.periods." + std::to_string(p);
    SubDiscriminatorWeights sub;
    std::size_t cin = 1;
    for (std::size_t l = 0; l < channels.size(); ++l) {
      const std::size_t stride = (l + 1 == channels.size()) ? 1 : 3;
      sub.layers.push_back(load_layer(src, prefix + ".convs." + std::to_string(l), cin, channels[l], 5, 1,
                                      {stride, 1, 2, 0}));
      cin = channels[l];
    }
    sub.post = load_layer(src, prefix + ".post", cin, 1, 3, 1, {1, 1, 1, 0});
    w.subs.push_back(std::move(sub));
  }
  return w;
}

MpdWeights MpdWeights::from_bundle(const WeightBundle& bundle, const MpdConfig& cfg) {
  BundleSource src(bundle, kModule);
  MpdWeights w = load(src, cfg);
  src.finish();
  return w;
}

MrdWeights MrdWeights::load(WeightSource& src, const MrdConfig& cfg) {
  cfg.validate();
  const std::size_t c = cfg.base_channels;
  MrdWeights w;
  for (std::size_t r = 0; r < cfg.resolutions(); ++r) {
    const std::string prefix = "mrd.resolutions." + std::to_string(r);
    SubDiscriminatorWeights sub;
    sub.layers.push_back(load_layer(src, prefix + ".convs.0", 1, c, 3, 9, {1, 1, 1, 4}));
    for (std::size_t l = 1; l <= 3; ++l) {
      sub.layers.push_back(load_layer(src, prefix + ".convs." + std::to_string(l), c, c, 3, 9, {1, 2, 1, 4}));
    }
    sub.layers.push_back(load_layer(src, prefix + ".convs.4", c, c, 3, 3, {1, 1, 1, 1}));
    sub.post = load_layer(src, prefix + ".post", c, 1, 3, 3, {1, 1, 1, 1});
    w.subs.push_back(std::move(sub));
  }
  return w;
}

MrdWeights MrdWeights::from_bundle(const WeightBundle& bundle, const MrdConfig& cfg) {
  BundleSource src(bundle, kModule);
  MrdWeights w = load(src, cfg);
  src.finish();
  return w;
}

Tensor mpd_reshape(const Tensor& audio, std::size_t period) {
  if (period == 0) throw ConfigError(kModule, "period must be >= 1");
  if (audio.rank() != 1 || audio.empty()) throw InputError(kModule, "mpd expects a non-empty 1-D signal");
  const std::size_t t = audio.size();
  const std::size_t rows = (t + period - 1) / period;
  Tensor out({rows, period});
  const auto n = static_cast<std::ptrdiff_t>(t);
  for (std::size_t i = 0; i < rows * period; ++i) {
    out[i] = audio[static_cast<std::size_t>(detail::reflect_index(static_cast<std::ptrdiff_t>(i), n))];
  }
  return out;
}

std::vector<DiscriminatorOutput> mpd_forward(const Tensor& audio, const MpdWeights& w, const MpdConfig& cfg) {
  if (w.subs.size() != cfg.periods.size()) throw ConfigError(kModule, "mpd weights do not match the period list");
  std::vector<DiscriminatorOutput> outs;
  for (std::size_t p = 0; p < cfg.periods.size(); ++p) {
    Tensor x = mpd_reshape(audio, cfg.periods[p]);
    outs.push_back(run_stack(x.reshaped({1, x.dim(0), x.dim(1)}), w.subs[p], cfg.activation));
  }
  return outs;
}

std::vector<DiscriminatorOutput> mrd_forward(const Tensor& audio, const MrdWeights& w, const MrdConfig& cfg) {
  if (w.subs.size() != cfg.resolutions()) throw ConfigError(kModule, "mrd weights do not match the resolutions");
  const std::size_t largest = *std::max_element(cfg.win_lengths.begin(), cfg.win_lengths.end());
  if (audio.size() < largest) {
    throw InputError(kModule, "audio of " + std::to_string(audio.size()) + " samples is shorter than the largest window " +
                                  std::to_string(largest));
  }
  std::vector<DiscriminatorOutput> outs;
  for (std::size_t r = 0; r < cfg.resolutions(); ++r) {
    const auto sc = StftConfig::hann(cfg.fft_sizes[r], cfg.hop_lengths[r], cfg.win_lengths[r]);
    Tensor spec = transpose2d(stft(audio, sc));
    outs.push_back(run_stack(spec.reshaped({1, spec.dim(0), spec.dim(1)}), w.subs[r], cfg.activation));
  }
  return outs;
}

Discriminators Discriminators::from_bundle(const WeightBundle& bundle, const Config& cfg) {
  return {MpdWeights::from_bundle(bundle, cfg.mpd), MrdWeights::from_bundle(bundle, cfg.mrd), cfg.mpd, cfg.mrd};
}

std::vector<DiscriminatorOutput> Discriminators::forward(const Tensor& audio) const {
  auto outs = mpd_forward(audio, mpd, mpd_cfg);
  auto mrd_outs = mrd_forward(audio, mrd, mrd_cfg);
  for (auto& o : mrd_outs) outs.push_back(std::move(o));
  return outs;
}

}  // namespace le2e
