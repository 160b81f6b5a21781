#include "le2e/losses.hpp"

#include <algorithm>
#include <cmath>

#include "le2e/error.hpp"

namespace le2e {

namespace {

constexpr const char* kModule = "losses";

void same_shape(const Tensor& a, const Tensor& b, const char* what) {
  if (a.shape() != b.shape()) {
    throw InputError(kModule, std::string(what) + ": shape mismatch " + shape_to_string(a.shape()) + " vs " +
                                  shape_to_string(b.shape()));
  }
}

double mean_sq_offset(const Tensor& t, double target) {
  double acc = 0.0;
  for (float v : t.values()) {
    const double d = static_cast<double>(v) - target;
    acc += d * d;
  }
  return acc / static_cast<double>(t.size());
}

double log_floor(float v) { return std::log(std::max(static_cast<double>(v), static_cast<double>(kLogFloor))); }

}  // namespace

double duration_loss(const Tensor& pred_log, const Tensor& oracle_log) {
  if (pred_log.size() != oracle_log.size()) {
    throw InputError(kModule, "duration loss: " + std::to_string(pred_log.size()) + " predictions vs " +
                                  std::to_string(oracle_log.size()) + " targets");
  }
  if (pred_log.empty()) throw InputError(kModule, "duration loss: empty input");
  double acc = 0.0;
  for (std::size_t i = 0; i < pred_log.size(); ++i) {
    const double d = static_cast<double>(pred_log[i]) - oracle_log[i];
    acc += d * d;
  }
  return acc / static_cast<double>(pred_log.size());
}

void PitchQuantizer::validate() const {
  if (bins != 256) throw ConfigError(kModule, "pitch quantizer must use 256 bins");
  if (!(std > 0.0)) throw ConfigError(kModule, "pitch std must be positive");
  if (!(range > 0.0)) throw ConfigError(kModule, "pitch range must be positive");
}

std::vector<std::size_t> pitch_quantize(const Tensor& f0, const PitchQuantizer& q) {
  q.validate();
  std::vector<std::size_t> out;
  out.reserve(f0.size());
  const double top = static_cast<double>(q.bins - 1);
  for (float v : f0.values()) {
    if (v == 0.0f) {
      out.push_back(0);
      continue;
    }
    const double z = (static_cast<double>(v) - q.mean) / q.std;
    const double pos = std::floor((z + q.range) / (2.0 * q.range) * static_cast<double>(q.bins));
    out.push_back(static_cast<std::size_t>(std::clamp(pos, 0.0, top)));
  }
  return out;
}

double pitch_ce_loss(const Tensor& logits, std::span<const std::size_t> targets) {
  if (logits.rank() != 2) throw InputError(kModule, "pitch logits must be [T, bins]");
  if (logits.dim(0) != targets.size()) {
    throw InputError(kModule, "pitch loss: " + std::to_string(logits.dim(0)) + " frames vs " +
                                  std::to_string(targets.size()) + " targets");
  }
  const std::size_t bins = logits.dim(1);
  double acc = 0.0;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    if (targets[t] >= bins) {
      throw InputError(kModule, "pitch target " + std::to_string(targets[t]) + " at frame " + std::to_string(t) +
                                    " is outside [0, " + std::to_string(bins) + ")");
    }
    auto row = logits.row(t);
    const double mx = *std::max_element(row.begin(), row.end());
    double sum = 0.0;
    for (float v : row) sum += std::exp(static_cast<double>(v) - mx);
    acc += mx + std::log(sum) - static_cast<double>(row[targets[t]]);
  }
  return acc / static_cast<double>(targets.size());
}

double lsgan_d_loss(std::span<const Tensor> real_scores, std::span<const Tensor> fake_scores) {
  if (real_scores.empty()) throw InputError(kModule, "discriminator loss: empty score list");
  if (real_scores.size() != fake_scores.size()) throw InputError(kModule, "discriminator loss: list length mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < real_scores.size(); ++k) {
    acc += mean_sq_offset(real_scores[k], 1.0) + mean_sq_offset(fake_scores[k], 0.0);
  }
  return acc / static_cast<double>(real_scores.size());
}

double lsgan_g_loss(std::span<const Tensor> fake_scores) {
  if (fake_scores.empty()) throw InputError(kModule, "generator loss: empty score list");
  double acc = 0.0;
  for (const auto& s : fake_scores) acc += mean_sq_offset(s, 1.0);
  return acc / static_cast<double>(fake_scores.size());
}

double feature_matching_loss(const FeatureNest& real, const FeatureNest& fake) {
  if (real.empty()) throw InputError(kModule, "feature matching: no discriminators");
  if (real.size() != fake.size()) throw InputError(kModule, "feature matching: discriminator count mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < real.size(); ++k) {
    if (real[k].size() != fake[k].size()) {
      throw InputError(kModule, "feature matching: layer count mismatch in discriminator " + std::to_string(k));
    }
    for (std::size_t l = 0; l < real[k].size(); ++l) {
      same_shape(real[k][l], fake[k][l], "feature matching");
      double layer = 0.0;
      for (std::size_t i = 0; i < real[k][l].size(); ++i) {
        layer += std::abs(static_cast<double>(real[k][l][i]) - fake[k][l][i]);
      }
      acc += layer / static_cast<double>(real[k][l].size());
    }
  }
  return acc / static_cast<double>(real.size());
}

std::vector<Tensor> scores_of(const std::vector<DiscriminatorOutput>& outs) {
  std::vector<Tensor> s;
  for (const auto& o : outs) s.push_back(o.score);
  return s;
}

FeatureNest features_of(const std::vector<DiscriminatorOutput>& outs) {
  FeatureNest f;
  for (const auto& o : outs) f.push_back(o.features);
  return f;
}

double spectral_convergence(const Tensor& s, const Tensor& s_hat) {
  same_shape(s, s_hat, "spectral convergence");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double d = static_cast<double>(s[i]) - s_hat[i];
    num += d * d;
    den += static_cast<double>(s[i]) * s[i];
  }
  if (den == 0.0) throw InputError(kModule, "spectral convergence: reference spectrogram is all zero");
  return std::sqrt(num) / std::sqrt(den);
}

double stft_magnitude_loss(const Tensor& s, const Tensor& s_hat) {
  same_shape(s, s_hat, "stft magnitude loss");
  if (s.empty()) throw InputError(kModule, "stft magnitude loss: empty input");
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) acc += std::abs(log_floor(s[i]) - log_floor(s_hat[i]));
  return acc / static_cast<double>(s.size());
}

std::vector<StftConfig> full_band_resolutions(const MrdConfig& cfg) {
  cfg.validate();
  std::vector<StftConfig> out;
  for (std::size_t r = 0; r < cfg.resolutions(); ++r) {
    out.push_back(StftConfig::hann(cfg.fft_sizes[r], cfg.hop_lengths[r], cfg.win_lengths[r]));
  }
  return out;
}

std::vector<StftConfig> sub_band_resolutions(const MrdConfig& cfg, std::size_t subbands) {
  cfg.validate();
  std::vector<StftConfig> out;
  for (std::size_t r = 0; r < cfg.resolutions(); ++r) {
    const std::size_t fft = std::max<std::size_t>(cfg.fft_sizes[r] / subbands, 32);
    const std::size_t hop = std::max<std::size_t>(cfg.hop_lengths[r] / subbands, 8);
    const std::size_t win = std::max<std::size_t>(cfg.win_lengths[r] / subbands, 32);
    out.push_back(StftConfig::hann(fft, hop, win));
  }
  return out;
}

double mr_stft_loss(const Tensor& x, const Tensor& x_hat, std::span<const StftConfig> resolutions) {
  same_shape(x, x_hat, "multi-resolution stft loss");
  if (resolutions.empty()) throw ConfigError(kModule, "no stft resolutions given");
  std::size_t largest = 0;
  for (const auto& r : resolutions) largest = std::max(largest, r.win_length);
  if (x.size() < largest) {
    throw InputError(kModule, "signal of " + std::to_string(x.size()) + " samples is shorter than the largest window " +
                                  std::to_string(largest));
  }
  double acc = 0.0;
  for (const auto& r : resolutions) {
    const Tensor s = stft(x, r);
    const Tensor s_hat = stft(x_hat, r);
    acc += spectral_convergence(s, s_hat) + stft_magnitude_loss(s, s_hat);
  }
  return acc / static_cast<double>(resolutions.size());
}

FullSubStft mr_stft_full_sub(const Tensor& x, const Tensor& x_hat, const PqmfBank& pqmf, const MrdConfig& cfg) {
  same_shape(x, x_hat, "multi-resolution stft loss");
  FullSubStft out;
  const auto full = full_band_resolutions(cfg);
  out.full = mr_stft_loss(x, x_hat, full);

  const std::size_t k_bands = pqmf.config().subbands;
  const auto sub = sub_band_resolutions(cfg, k_bands);
  const auto a = pqmf.analysis(x);
  const auto b = pqmf.analysis(x_hat);
  const std::size_t len = a.length();
  double acc = 0.0;
  for (std::size_t k = 0; k < k_bands; ++k) {
    const Tensor xa({len}, std::vector<float>(a.bands.row(k).begin(), a.bands.row(k).end()));
    const Tensor xb({len}, std::vector<float>(b.bands.row(k).begin(), b.bands.row(k).end()));
    acc += mr_stft_loss(xa, xb, sub);
  }
  out.sub = acc / static_cast<double>(k_bands);
  out.combined = (out.full + out.sub) / 2.0;
  return out;
}

double mel_loss(const Tensor& x, const Tensor& x_hat, const StftConfig& cfg, const MelFilterbank& fb) {
  same_shape(x, x_hat, "mel loss");
  const Tensor m = mel_spectrogram(x, cfg, fb);
  const Tensor m_hat = mel_spectrogram(x_hat, cfg, fb);
  double acc = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) acc += std::abs(static_cast<double>(m[i]) - m_hat[i]);
  return acc / static_cast<double>(m.size());
}

StftConfig mel_stft_config(const MelConfig& cfg) {
  return StftConfig::hann(cfg.fft_size, cfg.hop_length, cfg.win_length);
}

MelFilterbank mel_filterbank(const MelConfig& cfg, double sample_rate) {
  return MelFilterbank::create(cfg.n_mels, sample_rate, cfg.fft_size, cfg.f_min, cfg.f_max);
}

double total_generator_loss(const LossReport& r, const LossWeights& w) {
  w.validate();
  const std::pair<const char*, double> parts[] = {{"dur", r.dur},         {"f0", r.f0},   {"gan_g", r.gan_g},
                                                  {"fm", r.fm},           {"mel", r.mel}, {"stft_full", r.stft_full},
                                                  {"stft_sub", r.stft_sub}};
  for (const auto& [name, v] : parts) {
    if (!std::isfinite(v)) throw InputError(kModule, std::string("loss component '") + name + "' is not finite");
  }
  return r.dur + r.f0 + r.gan_g + w.lambda_fm * r.fm + w.lambda_mel * r.mel +
         w.lambda_stft * (r.stft_full + r.stft_sub) / 2.0;
}

}  // namespace le2e
