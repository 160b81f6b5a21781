#include "le2e/fixture.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "le2e/acoustic.hpp"
#include "le2e/discriminators.hpp"
#include "le2e/error.hpp"
#include "le2e/losses.hpp"
#include "le2e/numerics.hpp"
#include "le2e/pqmf.hpp"
#include "le2e/vocoder.hpp"

namespace le2e {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kModule = "fixture";

using Outputs = std::vector<std::pair<std::string, Tensor>>;

std::size_t get_size(const json& p, const char* key, std::size_t fallback) {
  return p.contains(key) ? p.at(key).get<std::size_t>() : fallback;
}

double get_double(const json& p, const char* key, double fallback) {
  return p.contains(key) ? p.at(key).get<double>() : fallback;
}

Tensor scalar(double v) { return Tensor({1}, std::vector<float>{static_cast<float>(v)}); }

std::vector<std::size_t> as_indices(const Tensor& t) {
  std::vector<std::size_t> out;
  for (float v : t.values()) out.push_back(static_cast<std::size_t>(std::lround(v)));
  return out;
}

std::vector<Tensor> numbered(const WeightBundle& in, const std::string& prefix) {
  std::vector<Tensor> out;
  for (std::size_t k = 0;; ++k) {
    const Tensor* t = in.find(prefix + "." + std::to_string(k));
    if (t == nullptr) break;
    out.push_back(*t);
  }
  return out;
}

StftConfig stft_of(const json& p) {
  return StftConfig::hann(get_size(p, "fft_size", 1024), get_size(p, "hop_length", 256),
                          get_size(p, "win_length", 1024));
}

MelFilterbank mel_of(const json& p) {
  return MelFilterbank::create(get_size(p, "n_mels", 80), get_double(p, "sample_rate", 22050.0),
                               get_size(p, "fft_size", 1024), get_double(p, "f_min", 0.0),
                               get_double(p, "f_max", 8000.0));
}

PqmfConfig pqmf_of(const json& p) {
  PqmfConfig c;
  c.subbands = get_size(p, "subbands", c.subbands);
  c.taps = get_size(p, "taps", c.taps);
  c.cutoff = get_double(p, "cutoff", c.cutoff);
  c.beta = get_double(p, "beta", c.beta);
  return c;
}

std::vector<StftConfig> resolutions_of(const json& p) {
  std::vector<StftConfig> out;
  for (const auto& r : p.at("resolutions")) {
    out.push_back(StftConfig::hann(r.at(0).get<std::size_t>(), r.at(1).get<std::size_t>(), r.at(2).get<std::size_t>()));
  }
  return out;
}

using Runner = std::function<Outputs(const WeightBundle&, const json&)>;

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> table{
      {"conv1d",
       [](const WeightBundle& in, const json& p) {
         return Outputs{{"y", conv1d(in.get("x"), in.get("w"), in.get("b"), get_size(p, "dilation", 1),
                                     get_size(p, "groups", 1))}};
       }},
      {"conv_transpose1d",
       [](const WeightBundle& in, const json& p) {
         return Outputs{{"y", conv_transpose1d(in.get("x"), in.get("w"), in.get("b"), p.at("stride").get<std::size_t>())}};
       }},
      {"conv2d",
       [](const WeightBundle& in, const json& p) {
         const Conv2dGeometry g{get_size(p, "stride_h", 1), get_size(p, "stride_w", 1), get_size(p, "pad_h", 0),
                                get_size(p, "pad_w", 0)};
         return Outputs{{"y", conv2d(in.get("x"), in.get("w"), in.get("b"), g)}};
       }},
      {"attention",
       [](const WeightBundle& in, const json& p) {
         return Outputs{{"y", multi_head_self_attention(in.get("x"), in.get("wq"), in.get("wk"), in.get("wv"),
                                                        in.get("wo"), p.at("heads").get<std::size_t>())}};
       }},
      {"layer_norm",
       [](const WeightBundle& in, const json& p) {
         return Outputs{{"y", layer_norm(in.get("x"), in.get("gamma"), in.get("beta"),
                                         static_cast<float>(get_double(p, "eps", 1e-5)))}};
       }},
      {"stft", [](const WeightBundle& in, const json& p) { return Outputs{{"y", stft(in.get("audio"), stft_of(p))}}; }},
      {"mel",
       [](const WeightBundle& in, const json& p) {
         return Outputs{{"y", mel_spectrogram(in.get("audio"), stft_of(p), mel_of(p))}};
       }},
      {"pqmf",
       [](const WeightBundle& in, const json& p) {
         const auto bank = PqmfBank::design(pqmf_of(p));
         auto bands = bank.analysis(in.get("audio"));
         Tensor y = bank.synthesis(bands);
         return Outputs{{"bands", std::move(bands.bands)}, {"y", std::move(y)}};
       }},
      {"duration_loss",
       [](const WeightBundle& in, const json&) {
         return Outputs{{"value", scalar(duration_loss(in.get("pred"), in.get("oracle")))}};
       }},
      {"pitch_ce",
       [](const WeightBundle& in, const json&) {
         return Outputs{{"value", scalar(pitch_ce_loss(in.get("logits"), as_indices(in.get("targets"))))}};
       }},
      {"lsgan",
       [](const WeightBundle& in, const json&) {
         const auto real = numbered(in, "real");
         const auto fake = numbered(in, "fake");
         return Outputs{{"d", scalar(lsgan_d_loss(real, fake))}, {"g", scalar(lsgan_g_loss(fake))}};
       }},
      {"spectral_convergence",
       [](const WeightBundle& in, const json&) {
         return Outputs{{"value", scalar(spectral_convergence(in.get("s"), in.get("s_hat")))}};
       }},
      {"stft_magnitude_loss",
       [](const WeightBundle& in, const json&) {
         return Outputs{{"value", scalar(stft_magnitude_loss(in.get("s"), in.get("s_hat")))}};
       }},
      {"mr_stft",
       [](const WeightBundle& in, const json& p) {
         const auto res = resolutions_of(p);
         return Outputs{{"value", scalar(mr_stft_loss(in.get("x"), in.get("x_hat"), res))}};
       }},
      {"mel_loss",
       [](const WeightBundle& in, const json& p) {
         return Outputs{{"value", scalar(mel_loss(in.get("x"), in.get("x_hat"), stft_of(p), mel_of(p)))}};
       }},
      {"generator",
       [](const WeightBundle& in, const json& p) {
         const Config cfg = Config::from_json_text(p.at("config").dump());
         PhonemeSequence seq{as_indices(in.get("input.phonemes"))};
         DurationSequence dur{as_indices(in.get("input.durations"))};
         const AcousticModel acoustic(in, cfg.acoustic);
         const Vocoder vocoder(in, cfg);
         auto out = acoustic.forward(seq, dur);
         Tensor wave = vocoder.forward(out.latent);
         return Outputs{{"log_durations", std::move(out.log_durations)},
                        {"pitch_logits", std::move(out.pitch_logits)},
                        {"latent", std::move(out.latent.frames)},
                        {"waveform", std::move(wave)}};
       }},
      {"discriminators",
       [](const WeightBundle& in, const json& p) {
         const Config cfg = Config::from_json_text(p.at("config").dump());
         const auto d = Discriminators::from_bundle(in, cfg);
         const Tensor& audio = in.get("input.audio");
         Outputs out;
         auto emit = [&](const std::string& prefix, const std::vector<DiscriminatorOutput>& outs) {
           for (std::size_t k = 0; k < outs.size(); ++k) {
             const std::string base = prefix + "." + std::to_string(k);
             for (std::size_t l = 0; l < outs[k].features.size(); ++l)
               out.emplace_back(base + ".features." + std::to_string(l), outs[k].features[l]);
             out.emplace_back(base + ".score", outs[k].score);
           }
         };
         emit("mpd", mpd_forward(audio, d.mpd, d.mpd_cfg));
         emit("mrd", mrd_forward(audio, d.mrd, d.mrd_cfg));
         return out;
       }},
  };
  return table;
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(kModule, "cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(kModule, 0, "'" + path.string() + "': " + e.what());
  }
}

}  // namespace

Fixture load_fixture(const std::string& dir) {
  const fs::path root(dir);
  const json meta = read_json(root / "meta.json");
  Fixture f;
  f.name = root.filename().string();
  try {
    f.op = meta.at("op").get<std::string>();
    f.oracle = meta.value("oracle", std::string{});
    f.seed = meta.value("seed", std::uint64_t{0});
    f.tolerance = meta.at("tolerance").get<double>();
    f.params_json = meta.value("params", json::object()).dump();
  } catch (const json::exception& e) {
    throw FormatError(kModule, 0, "'" + (root / "meta.json").string() + "': " + e.what());
  }
  f.inputs = load_bundle((root / "inputs.le2e").string());
  f.expected = load_bundle((root / "expected.le2e").string());
  return f;
}

void save_fixture(const std::string& dir, const Fixture& fixture) {
  const fs::path root(dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw IoError(kModule, "cannot create '" + root.string() + "': " + ec.message());
  json meta{{"op", fixture.op},
            {"oracle", fixture.oracle},
            {"seed", fixture.seed},
            {"tolerance", fixture.tolerance},
            {"params", json::parse(fixture.params_json)}};
  std::ofstream out(root / "meta.json");
  if (!out) throw IoError(kModule, "cannot write '" + (root / "meta.json").string() + "'");
  out << meta.dump(2) << "\n";
  save_bundle(fixture.inputs, (root / "inputs.le2e").string());
  save_bundle(fixture.expected, (root / "expected.le2e").string());
}

std::vector<Fixture> load_fixture_set(const std::string& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw IoError(kModule, "'" + root + "' is not a directory");
  std::vector<std::string> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / "meta.json")) dirs.push_back(entry.path().string());
  }
  std::sort(dirs.begin(), dirs.end());
  std::vector<Fixture> out;
  for (const auto& d : dirs) out.push_back(load_fixture(d));
  return out;
}

FixtureResult run_fixture(const Fixture& fixture) {
  FixtureResult r;
  r.name = fixture.name;
  r.op = fixture.op;
  r.tolerance = fixture.tolerance;
  const auto it = runners().find(fixture.op);
  if (it == runners().end()) {
    r.error = "unknown op '" + fixture.op + "'";
    return r;
  }
  try {
    const Outputs outs = it->second(fixture.inputs, json::parse(fixture.params_json));
    bool ok = !fixture.expected.entries().empty();
    for (const auto& [name, want] : fixture.expected.entries()) {
      const auto got = std::find_if(outs.begin(), outs.end(), [&](const auto& o) { return o.first == name; });
      if (got == outs.end()) {
        r.error = "engine produced no output named '" + name + "'";
        return r;
      }
      if (got->second.shape() != want.shape()) {
        r.error = "'" + name + "' shape " + shape_to_string(got->second.shape()) + " vs expected " +
                  shape_to_string(want.shape());
        return r;
      }
      const double d = max_abs_diff(got->second, want);
      r.max_abs_diff.emplace_back(name, d);
      ok = ok && d <= fixture.tolerance;
    }
    r.passed = ok;
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

}  // namespace le2e
