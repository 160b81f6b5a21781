#include "le2e/config.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "le2e/error.hpp"

namespace le2e {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError("config", message);
}

}  // namespace

void ModelConfig::validate() const {
  require(hidden >= 1 && heads >= 1 && hidden % heads == 0,
          "hidden " + std::to_string(hidden) + " must be divisible by heads " + std::to_string(heads));
  require(vocab_size >= 1, "vocab_size must be >= 1");
  require(pitch_bins == 256, "pitch_bins must be 256");
  require(duration_layers >= 1 && pitch_layers >= 1, "predictors need at least one layer");
  require(duration_kernel >= 1 && pitch_kernel >= 1, "predictor kernels must be >= 1");
  for (auto k : encoder_kernels) require(k >= 1, "encoder kernels must be >= 1");
  for (auto k : decoder_kernels) require(k >= 1, "decoder kernels must be >= 1");
  require(sample_rate > 0 && frame_hop > 0, "sample_rate and frame_hop must be positive");
}

std::size_t VocoderConfig::hop() const {
  return std::accumulate(upsample_factors.begin(), upsample_factors.end(), std::size_t{1},
                         std::multiplies<>()) *
         subbands;
}

void VocoderConfig::validate(std::size_t frame_hop) const {
  require(!upsample_factors.empty(), "vocoder needs at least one upsampling stage");
  require(up_channels.size() == upsample_factors.size() && up_kernels.size() == upsample_factors.size(),
          "upsample_factors, up_channels and up_kernels must have equal length");
  for (std::size_t i = 0; i < upsample_factors.size(); ++i) {
    require(upsample_factors[i] >= 1 && up_kernels[i] >= upsample_factors[i],
            "up_kernels[" + std::to_string(i) + "] must be >= its upsample factor");
    require(up_channels[i] >= 1, "up_channels must be positive");
  }
  require(hop() == frame_hop, "product(upsample_factors) * subbands = " + std::to_string(hop()) +
                                  " must equal frame_hop " + std::to_string(frame_hop));
  require(res_dilations.size() == resblocks_per_stage, "res_dilations must list one dilation per residual block");
  require(input_channels >= 1 && stem_channels >= 1 && stem_kernel >= 1 && out_kernel >= 1 && res_kernel >= 1,
          "vocoder channel counts and kernels must be positive");
  require(subbands >= 1, "subbands must be >= 1");
}

void PqmfConfig::validate() const {
  require(subbands >= 2, "pqmf needs at least 2 subbands");
  require(taps >= 2 && taps % 2 == 0, "pqmf taps must be even (filter length taps+1 is odd), got " +
                                          std::to_string(taps));
  require(cutoff > 0.0 && cutoff < 1.0, "pqmf cutoff ratio must lie in (0, 1)");
  require(beta >= 0.0, "pqmf Kaiser beta must be non-negative");
}

void MpdConfig::validate() const {
  require(!periods.empty(), "mpd needs at least one period");
  for (std::size_t i = 0; i < periods.size(); ++i) {
    require(periods[i] >= 1, "mpd periods must be >= 1");
    if (i) require(periods[i] > periods[i - 1], "mpd periods must be strictly increasing");
    for (std::size_t j = 0; j < i; ++j)
      require(std::gcd(periods[i], periods[j]) == 1, "mpd periods must be pairwise coprime");
  }
  require(base_channels >= 1, "mpd base_channels must be >= 1");
}

void MrdConfig::validate() const {
  require(!fft_sizes.empty() && hop_lengths.size() == fft_sizes.size() && win_lengths.size() == fft_sizes.size(),
          "mrd fft_sizes, hop_lengths and win_lengths must be parallel lists");
  for (std::size_t i = 0; i < fft_sizes.size(); ++i) {
    require(win_lengths[i] <= fft_sizes[i] && hop_lengths[i] >= 1 && hop_lengths[i] <= win_lengths[i],
            "mrd resolution " + std::to_string(i) + " needs hop <= win <= fft");
  }
  require(base_channels >= 1, "mrd base_channels must be >= 1");
}

void LossWeights::validate() const {
  require(lambda_fm > 0 && lambda_mel > 0 && lambda_stft > 0, "loss weights must be positive");
}

void Config::validate() const {
  acoustic.validate();
  vocoder.validate(acoustic.frame_hop);
  require(vocoder.input_channels == acoustic.hidden, "vocoder input_channels must equal acoustic hidden size");
  pqmf.validate();
  require(pqmf.subbands == vocoder.subbands, "pqmf subbands must match vocoder subbands");
  mpd.validate();
  mrd.validate();
  loss.validate();
  require(pitch_range > 0.0, "pitch_range must be positive");
}

Config Config::tiny() {
  Config cfg;
  cfg.acoustic.vocab_size = 16;
  cfg.acoustic.hidden = 16;
  cfg.acoustic.heads = 2;
  cfg.vocoder.input_channels = 16;
  cfg.vocoder.stem_channels = 16;
  cfg.vocoder.up_channels = {8, 8, 4};
  cfg.mpd.base_channels = 2;
  cfg.mrd.base_channels = 2;
  return cfg;
}

// ---- JSON ----------------------------------------------------------------

namespace {

using nlohmann::json;

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (auto it = obj.find(key); it != obj.end()) {
    try {
      it->get_to(out);
    } catch (const json::exception& e) {
      throw ConfigError("config", std::string("bad value for '") + key + "': " + e.what());
    }
  }
}

void check_keys(const json& obj, const char* section, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError("config", std::string("section '") + section + "' must be an object");
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError("config", "unknown key '" + key + "' in section '" + section + "'");
  }
}

Activation parse_activation(const json& obj) {
  std::string name = "relu";
  read(obj, "activation", name);
  if (name == "relu") return Activation::Relu;
  if (name == "leaky_relu") return Activation::LeakyRelu;
  throw ConfigError("config", "activation must be 'relu' or 'leaky_relu', got '" + name + "'");
}

const char* activation_name(Activation a) { return a == Activation::Relu ? "relu" : "leaky_relu"; }

}  // namespace

Config Config::from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  check_keys(root, "root", {"acoustic", "vocoder", "pqmf", "mpd", "mrd", "mel", "loss", "pitch_range"});
  Config cfg;
  if (root.contains("acoustic")) {
    const auto& a = root["acoustic"];
    check_keys(a, "acoustic",
               {"vocab_size", "hidden", "heads", "encoder_kernels", "decoder_kernels", "duration_layers",
                "duration_kernel", "pitch_layers", "pitch_kernel", "pitch_bins", "sample_rate", "frame_hop",
                "layer_norm_eps"});
    auto& m = cfg.acoustic;
    read(a, "vocab_size", m.vocab_size);
    read(a, "hidden", m.hidden);
    read(a, "heads", m.heads);
    std::vector<std::size_t> enc(m.encoder_kernels.begin(), m.encoder_kernels.end());
    std::vector<std::size_t> dec(m.decoder_kernels.begin(), m.decoder_kernels.end());
    read(a, "encoder_kernels", enc);
    read(a, "decoder_kernels", dec);
    require(enc.size() == 4 && dec.size() == 4, "encoder/decoder kernel lists must have length 4");
    std::copy(enc.begin(), enc.end(), m.encoder_kernels.begin());
    std::copy(dec.begin(), dec.end(), m.decoder_kernels.begin());
    read(a, "duration_layers", m.duration_layers);
    read(a, "duration_kernel", m.duration_kernel);
    read(a, "pitch_layers", m.pitch_layers);
    read(a, "pitch_kernel", m.pitch_kernel);
    read(a, "pitch_bins", m.pitch_bins);
    read(a, "sample_rate", m.sample_rate);
    read(a, "frame_hop", m.frame_hop);
    read(a, "layer_norm_eps", m.layer_norm_eps);
  }
  if (root.contains("vocoder")) {
    const auto& v = root["vocoder"];
    check_keys(v, "vocoder",
               {"upsample_factors", "up_channels", "up_kernels", "input_channels", "stem_channels",
                "stem_kernel", "resblocks_per_stage", "res_dilations", "res_kernel", "leaky_slope",
                "out_kernel", "subbands"});
    auto& m = cfg.vocoder;
    read(v, "upsample_factors", m.upsample_factors);
    read(v, "up_channels", m.up_channels);
    read(v, "up_kernels", m.up_kernels);
    read(v, "input_channels", m.input_channels);
    read(v, "stem_channels", m.stem_channels);
    read(v, "stem_kernel", m.stem_kernel);
    read(v, "resblocks_per_stage", m.resblocks_per_stage);
    read(v, "res_dilations", m.res_dilations);
    read(v, "res_kernel", m.res_kernel);
    read(v, "leaky_slope", m.leaky_slope);
    read(v, "out_kernel", m.out_kernel);
    read(v, "subbands", m.subbands);
  }
  if (root.contains("pqmf")) {
    const auto& p = root["pqmf"];
    check_keys(p, "pqmf", {"subbands", "taps", "cutoff", "beta"});
    read(p, "subbands", cfg.pqmf.subbands);
    read(p, "taps", cfg.pqmf.taps);
    read(p, "cutoff", cfg.pqmf.cutoff);
    read(p, "beta", cfg.pqmf.beta);
  }
  if (root.contains("mpd")) {
    const auto& p = root["mpd"];
    check_keys(p, "mpd", {"periods", "base_channels", "activation"});
    read(p, "periods", cfg.mpd.periods);
    read(p, "base_channels", cfg.mpd.base_channels);
    cfg.mpd.activation = parse_activation(p);
  }
  if (root.contains("mrd")) {
    const auto& p = root["mrd"];
    check_keys(p, "mrd", {"fft_sizes", "hop_lengths", "win_lengths", "base_channels", "activation"});
    read(p, "fft_sizes", cfg.mrd.fft_sizes);
    read(p, "hop_lengths", cfg.mrd.hop_lengths);
    read(p, "win_lengths", cfg.mrd.win_lengths);
    read(p, "base_channels", cfg.mrd.base_channels);
    cfg.mrd.activation = parse_activation(p);
  }
  if (root.contains("mel")) {
    const auto& p = root["mel"];
    check_keys(p, "mel", {"n_mels", "fft_size", "hop_length", "win_length", "f_min", "f_max"});
    read(p, "n_mels", cfg.mel.n_mels);
    read(p, "fft_size", cfg.mel.fft_size);
    read(p, "hop_length", cfg.mel.hop_length);
    read(p, "win_length", cfg.mel.win_length);
    read(p, "f_min", cfg.mel.f_min);
    read(p, "f_max", cfg.mel.f_max);
  }
  if (root.contains("loss")) {
    const auto& p = root["loss"];
    check_keys(p, "loss", {"lambda_fm", "lambda_mel", "lambda_stft"});
    read(p, "lambda_fm", cfg.loss.lambda_fm);
    read(p, "lambda_mel", cfg.loss.lambda_mel);
    read(p, "lambda_stft", cfg.loss.lambda_stft);
  }
  read(root, "pitch_range", cfg.pitch_range);
  cfg.validate();
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("config", "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string Config::to_json_text() const {
  json root;
  const auto& a = acoustic;
  root["acoustic"] = {{"vocab_size", a.vocab_size},       {"hidden", a.hidden},
                      {"heads", a.heads},                 {"encoder_kernels", a.encoder_kernels},
                      {"decoder_kernels", a.decoder_kernels}, {"duration_layers", a.duration_layers},
                      {"duration_kernel", a.duration_kernel}, {"pitch_layers", a.pitch_layers},
                      {"pitch_kernel", a.pitch_kernel},   {"pitch_bins", a.pitch_bins},
                      {"sample_rate", a.sample_rate},     {"frame_hop", a.frame_hop},
                      {"layer_norm_eps", a.layer_norm_eps}};
  const auto& v = vocoder;
  root["vocoder"] = {{"upsample_factors", v.upsample_factors}, {"up_channels", v.up_channels},
                     {"up_kernels", v.up_kernels},             {"input_channels", v.input_channels},
                     {"stem_channels", v.stem_channels},       {"stem_kernel", v.stem_kernel},
                     {"resblocks_per_stage", v.resblocks_per_stage}, {"res_dilations", v.res_dilations},
                     {"res_kernel", v.res_kernel},             {"leaky_slope", v.leaky_slope},
                     {"out_kernel", v.out_kernel},             {"subbands", v.subbands}};
  root["pqmf"] = {{"subbands", pqmf.subbands}, {"taps", pqmf.taps}, {"cutoff", pqmf.cutoff}, {"beta", pqmf.beta}};
  root["mpd"] = {{"periods", mpd.periods}, {"base_channels", mpd.base_channels},
                 {"activation", activation_name(mpd.activation)}};
  root["mrd"] = {{"fft_sizes", mrd.fft_sizes},     {"hop_lengths", mrd.hop_lengths},
                 {"win_lengths", mrd.win_lengths}, {"base_channels", mrd.base_channels},
                 {"activation", activation_name(mrd.activation)}};
  root["mel"] = {{"n_mels", mel.n_mels},         {"fft_size", mel.fft_size}, {"hop_length", mel.hop_length},
                 {"win_length", mel.win_length}, {"f_min", mel.f_min},       {"f_max", mel.f_max}};
  root["loss"] = {{"lambda_fm", loss.lambda_fm}, {"lambda_mel", loss.lambda_mel}, {"lambda_stft", loss.lambda_stft}};
  root["pitch_range"] = pitch_range;
  return root.dump(2);
}

}  // namespace le2e
