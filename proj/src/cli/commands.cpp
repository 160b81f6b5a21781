#include "le2e/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "le2e/discriminators.hpp"
#include "le2e/error.hpp"
#include "le2e/fixture.hpp"
#include "le2e/layout.hpp"
#include "le2e/losses.hpp"
#include "le2e/parallel.hpp"
#include "le2e/pqmf.hpp"
#include "le2e/signals.hpp"
#include "le2e/wav.hpp"

namespace le2e::cli {

using nlohmann::json;

namespace {

constexpr double kTargetParams = 3.71e6;
constexpr double kParamBand = 0.15;
constexpr double kPqmfSnrGate = 35.0;

struct Common {
  std::string weights;
  std::string config;
  std::uint64_t seed = 0;
  int threads = 0;
  bool json = false;
};

void setup_logging() {
  auto logger = spdlog::get("le2e");
  if (!logger) logger = spdlog::stderr_color_mt("le2e");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("LE2E_LOG")) {
    const std::string level(env);
    if (level == "debug") spdlog::set_level(spdlog::level::debug);
    if (level == "info") spdlog::set_level(spdlog::level::info);
  }
}

Config load_config(const Common& c) {
  Config cfg = c.config.empty() ? Config{} : Config::load(c.config);
  cfg.validate();
  return cfg;
}

WeightBundle load_or_init_generator(const Common& c, const Config& cfg) {
  if (!c.weights.empty()) {
    spdlog::info("loading weights from {}", c.weights);
    return load_bundle(c.weights);
  }
  spdlog::warn("no --weights given; using random generator weights (seed {})", c.seed);
  return random_bundle(generator_layout(cfg), c.seed);
}

void apply_threads(int threads) {
  if (threads > 0) set_num_threads(static_cast<std::size_t>(threads));
  spdlog::debug("kernel threads: {}", num_threads());
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cli", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- synth ---------------------------------------------------------------

struct SynthArgs {
  std::string phonemes;
  std::string phonemes_file;
  std::string durations;
  std::string out;
};

int cmd_synth(const Common& c, const SynthArgs& a) {
  const Config cfg = load_config(c);
  apply_threads(c.threads);
  const std::string id_text = a.phonemes_file.empty() ? a.phonemes : read_text_file(a.phonemes_file);
  PhonemeSequence seq{parse_ids(id_text, "phoneme ids")};
  if (seq.ids.empty()) throw InputError("cli", "no phoneme ids given (use --phonemes or --phonemes-file)");
  std::optional<DurationSequence> dur;
  if (!a.durations.empty()) dur = DurationSequence{parse_ids(a.durations, "durations")};

  const Synthesizer synth(load_or_init_generator(c, cfg), cfg);
  const auto t0 = std::chrono::steady_clock::now();
  const Synthesis s = synth.run(seq, dur);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_wav(a.out, s.waveform, static_cast<std::uint32_t>(cfg.acoustic.sample_rate));

  const std::size_t frames = s.acoustic.durations.total();
  if (c.json) {
    std::cout << json{{"out", a.out},
                      {"phonemes", seq.ids.size()},
                      {"frames", frames},
                      {"samples", s.waveform.size()},
                      {"seconds", static_cast<double>(s.waveform.size()) / cfg.acoustic.sample_rate},
                      {"wall_seconds", wall}}
                     .dump()
              << "\n";
  } else {
    std::cout << "wrote " << a.out << ": " << s.waveform.size() << " samples (" << frames << " frames) in "
              << std::fixed << std::setprecision(3) << wall << " s\n";
  }
  return kOk;
}

// ---- bench ---------------------------------------------------------------

int cmd_bench(const Common& c, double seconds, int runs) {
  const Config cfg = load_config(c);
  if (runs < 3) throw InputError("cli", "bench needs --runs >= 3");
  apply_threads(c.threads > 0 ? c.threads : 1);
  const Synthesizer synth(load_or_init_generator(c, cfg), cfg);
  const BenchReport r = run_bench(synth, seconds, runs);
  if (c.json) {
    std::cout << json{{"synthesized_seconds", r.synthesized_seconds},
                      {"wall_seconds", r.wall_seconds},
                      {"wall_mean", r.wall_mean},
                      {"wall_stddev", r.wall_stddev},
                      {"rtf", r.rtf},
                      {"runs", r.wall_seconds.size()},
                      {"threads", r.threads}}
                     .dump()
              << "\n";
  } else {
    std::cout << std::fixed << std::setprecision(4) << "synthesized " << r.synthesized_seconds << " s audio, "
              << r.wall_seconds.size() << " runs, " << r.threads << " thread(s)\n"
              << "wall " << r.wall_mean << " +- " << r.wall_stddev << " s\n"
              << "rtf  " << r.rtf << "\n";
  }
  return kOk;
}

// ---- loss-report ---------------------------------------------------------

struct LossArgs {
  std::string reference;
  std::string predicted;
  std::string disc_weights;
  std::string dur_pred;
  std::string dur_oracle;
  std::string pitch;
  double f0_mean = 0.0;
  double f0_std = 1.0;
};

int cmd_loss_report(const Common& c, const LossArgs& a) {
  const Config cfg = load_config(c);
  apply_threads(c.threads);
  const WavAudio ref = read_wav(a.reference);
  const WavAudio pred = read_wav(a.predicted);
  if (ref.sample_rate != pred.sample_rate) {
    throw InputError("cli", "sample rate mismatch: " + std::to_string(ref.sample_rate) + " vs " +
                                std::to_string(pred.sample_rate) + " Hz");
  }
  if (ref.samples.size() != pred.samples.size()) {
    throw InputError("cli", "length mismatch: " + std::to_string(ref.samples.size()) + " vs " +
                                std::to_string(pred.samples.size()) + " samples");
  }
  const Tensor& x = ref.samples;
  const Tensor& y = pred.samples;

  LossReport r;
  std::map<std::string, bool> present;
  const auto pqmf = PqmfBank::design(cfg.pqmf);
  const auto st = mr_stft_full_sub(x, y, pqmf, cfg.mrd);
  r.stft_full = st.full;
  r.stft_sub = st.sub;
  r.mel = mel_loss(x, y, mel_stft_config(cfg.mel), mel_filterbank(cfg.mel, ref.sample_rate));
  present["mel"] = present["stft_full"] = present["stft_sub"] = true;

  if (!a.disc_weights.empty()) {
    const auto disc = Discriminators::from_bundle(load_bundle(a.disc_weights), cfg);
    const auto real = disc.forward(x);
    const auto fake = disc.forward(y);
    const auto rs = scores_of(real);
    const auto fs = scores_of(fake);
    r.gan_d = lsgan_d_loss(rs, fs);
    r.gan_g = lsgan_g_loss(fs);
    r.fm = feature_matching_loss(features_of(real), features_of(fake));
    present["gan_d"] = present["gan_g"] = present["fm"] = true;
  }
  if (!a.dur_pred.empty() || !a.dur_oracle.empty()) {
    const auto p = parse_floats(a.dur_pred, "--dur-pred");
    const auto o = parse_floats(a.dur_oracle, "--dur-oracle");
    if (p.empty() || o.empty()) throw InputError("cli", "--dur-pred and --dur-oracle must be given together");
    r.dur = duration_loss(Tensor({p.size()}, p), Tensor({o.size()}, o));
    present["dur"] = true;
  }
  if (!a.pitch.empty()) {
    const WeightBundle b = load_bundle(a.pitch);
    const PitchQuantizer q{256, a.f0_mean, a.f0_std, cfg.pitch_range};
    r.f0 = pitch_ce_loss(b.get("logits"), pitch_quantize(b.get("f0"), q));
    present["f0"] = true;
  }
  r.total = total_generator_loss(r, cfg.loss);

  const std::vector<std::pair<std::string, double>> rows{{"dur", r.dur},   {"f0", r.f0},
                                                         {"gan_g", r.gan_g}, {"gan_d", r.gan_d},
                                                         {"fm", r.fm},     {"mel", r.mel},
                                                         {"stft_full", r.stft_full}, {"stft_sub", r.stft_sub}};
  if (c.json) {
    json j;
    for (const auto& [name, v] : rows) j[name] = present[name] ? json(v) : json(nullptr);
    j["stft_combined"] = st.combined;
    j["total"] = r.total;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << std::setprecision(8);
    for (const auto& [name, v] : rows) {
      std::cout << std::left << std::setw(14) << name;
      if (present[name]) {
        std::cout << v << "\n";
      } else {
        std::cout << "n/a\n";
      }
    }
    std::cout << std::left << std::setw(14) << "stft_combined" << st.combined << "\n"
              << std::left << std::setw(14) << "total" << r.total << "  (absent terms count as 0)\n";
  }
  return kOk;
}

// ---- verify --------------------------------------------------------------

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyArgs {
  std::string fixtures;
  double pqmf_cutoff = 0.0;  // 0: configured value
};

Check check_param_count(const Common& c, const Config& cfg) {
  Check k{"param_count", false, ""};
  std::map<std::string, std::uint64_t> per;
  std::uint64_t total = 0;
  std::vector<std::string> missing_prefixes;
  const auto layout = generator_layout(cfg);
  if (!c.weights.empty()) {
    const WeightBundle b = load_bundle(c.weights);
    const auto report = count_parameters(b, kGeneratorPrefixes);
    for (const auto& [m, n] : report.per_module) per[m] = n;
    total = report.total;
    for (const auto& problem : layout_problems(b, layout)) {
      const std::string prefix = problem.substr(0, problem.find('.')) + ".";
      if (std::find(missing_prefixes.begin(), missing_prefixes.end(), prefix) == missing_prefixes.end()) {
        missing_prefixes.push_back(prefix);
      }
    }
  } else {
    for (const auto& s : layout) {
      const auto n = shape_numel(s.shape);
      per[s.name.substr(0, s.name.find('.'))] += n;
      total += n;
    }
  }
  std::ostringstream d;
  d << "total " << total << " vs 3.71M +-15% [" << static_cast<std::uint64_t>(kTargetParams * (1 - kParamBand)) << ", "
    << static_cast<std::uint64_t>(kTargetParams * (1 + kParamBand)) << "];";
  for (const auto& m : kGeneratorPrefixes) d << " " << m << "." << "=" << (per.count(m) ? per[m] : 0);
  if (!missing_prefixes.empty()) {
    d << "; missing/mis-shaped tensors under";
    for (const auto& p : missing_prefixes) d << " \"" << p << "\"";
  }
  const double rel = std::abs(static_cast<double>(total) - kTargetParams) / kTargetParams;
  k.passed = rel <= kParamBand && missing_prefixes.empty();
  k.detail = d.str();
  return k;
}

Check check_rate_identity(std::uint64_t seed) {
  Check k{"rate_identity", true, ""};
  const Config cfg = Config::tiny();
  const WeightBundle w = random_bundle(generator_layout(cfg), seed);
  const Synthesizer synth(w, cfg);
  std::ostringstream d;
  for (std::size_t t : {1, 2, 7, 31, 64}) {
    const auto s = synth.run(PhonemeSequence{{1}}, DurationSequence{{t}});
    const bool ok = s.waveform.size() == 300 * t && s.acoustic.latent.length() == t;
    k.passed = k.passed && ok;
    d << "T=" << t << "->" << s.waveform.size() << (ok ? " " : "(!) ");
  }
  k.detail = d.str();
  return k;
}

Check check_pqmf(const Config& cfg, const VerifyArgs& a, std::uint64_t seed) {
  PqmfConfig pc = cfg.pqmf;
  if (a.pqmf_cutoff > 0.0) pc.cutoff = a.pqmf_cutoff;
  const auto bank = PqmfBank::design(pc);
  const std::size_t n = 2 * 22050;
  const Tensor noise = white_noise(n, seed);
  const Tensor chirp = linear_chirp(n, 22050.0, 100.0, 8000.0);
  const double snr_noise = reconstruction_snr_db(noise, bank.synthesis(bank.analysis(noise)), bank.delay());
  const double snr_chirp = reconstruction_snr_db(chirp, bank.synthesis(bank.analysis(chirp)), bank.delay());
  std::ostringstream d;
  d << "cutoff " << pc.cutoff << " beta " << pc.beta << std::fixed << std::setprecision(2) << ": noise " << snr_noise
    << " dB, chirp " << snr_chirp << " dB (gate > 35 dB)";
  return {"pqmf_round_trip", snr_noise > kPqmfSnrGate && snr_chirp > kPqmfSnrGate, d.str()};
}

Check check_losses(const Config& cfg, std::uint64_t seed) {
  constexpr double kTol = 1e-5;
  std::vector<std::string> failures;
  auto expect = [&](const std::string& what, double got, double want) {
    if (!(std::abs(got - want) <= kTol)) {
      std::ostringstream s;
      s << what << "=" << got << " (want " << want << ")";
      failures.push_back(s.str());
    }
  };
  const Tensor x = white_noise(22050, seed, 0.2f);
  Tensor x2 = x;
  for (auto& v : x2.storage()) v *= 2.0f;
  const auto pqmf = PqmfBank::design(cfg.pqmf);

  const Tensor d = white_noise(17, seed + 1);
  expect("duration(identity)", duration_loss(d, d), 0.0);
  const std::vector<Tensor> ones{Tensor({3, 5}, 1.0f), Tensor({2, 7}, 1.0f)};
  const std::vector<Tensor> zeros{Tensor({3, 5}, 0.0f), Tensor({2, 7}, 0.0f)};
  expect("lsgan_d(real 1, fake 0)", lsgan_d_loss(ones, zeros), 0.0);
  expect("lsgan_g(fake 1)", lsgan_g_loss(ones), 0.0);
  const FeatureNest f{{x, d}};
  expect("feature_matching(identity)", feature_matching_loss(f, f), 0.0);

  const auto full = full_band_resolutions(cfg.mrd);
  for (std::size_t r = 0; r < full.size(); ++r) {
    const Tensor s = stft(x, full[r]);
    const Tensor s2 = stft(x2, full[r]);
    expect("sc(identity)", spectral_convergence(s, s), 0.0);
    expect("mag(identity)", stft_magnitude_loss(s, s), 0.0);
    expect("sc(2s)", spectral_convergence(s, s2), 1.0);
  }
  Tensor one_s({4, 9}, 0.5f);
  Tensor two_s({4, 9}, 1.0f);
  expect("mag(2s)", stft_magnitude_loss(one_s, two_s), std::log(2.0));
  const auto fs = mr_stft_full_sub(x, x, pqmf, cfg.mrd);
  expect("stft_full(identity)", fs.full, 0.0);
  expect("stft_sub(identity)", fs.sub, 0.0);
  expect("mel(identity)", mel_loss(x, x, mel_stft_config(cfg.mel), mel_filterbank(cfg.mel, 22050.0)), 0.0);

  Tensor logits({4, 256}, 0.0f);
  const std::vector<std::size_t> targets{0, 17, 128, 255};
  expect("pitch_ce(uniform)", pitch_ce_loss(logits, targets), std::log(256.0));

  LossReport unit{1, 1, 1, 1, 1, 1, 1, 1, 0};
  expect("total(unit)", total_generator_loss(unit, cfg.loss), 12.5);
  expect("total(zero)", total_generator_loss(LossReport{}, cfg.loss), 0.0);

  Check k{"loss_identities", failures.empty(), ""};
  if (failures.empty()) {
    k.detail = "all identity and closed-form cases within 1e-5";
  } else {
    for (const auto& s : failures) k.detail += s + "; ";
  }
  return k;
}

Check check_determinism(std::uint64_t seed) {
  const Config cfg = Config::tiny();
  const Synthesizer synth(random_bundle(generator_layout(cfg), seed), cfg);
  const PhonemeSequence seq{{1, 5, 9, 3}};
  const auto a = encode_wav(synth.run(seq).waveform, 22050);
  const auto b = encode_wav(synth.run(seq).waveform, 22050);
  return {"determinism", a == b, a == b ? "repeated synthesis is byte-identical" : "WAV bytes differ"};
}

std::vector<Check> check_fixtures(const std::string& root) {
  std::vector<Check> out;
  for (const auto& f : load_fixture_set(root)) {
    const auto r = run_fixture(f);
    std::ostringstream d;
    d << r.op << " tol " << r.tolerance;
    if (r.max_abs_diff.size() <= 4) {
      for (const auto& [name, diff] : r.max_abs_diff) d << " " << name << "=" << diff;
    } else {
      const auto worst = std::max_element(r.max_abs_diff.begin(), r.max_abs_diff.end(),
                                          [](const auto& a, const auto& b) { return a.second < b.second; });
      d << " " << r.max_abs_diff.size() << " tensors, worst " << worst->first << "=" << worst->second;
    }
    if (!r.error.empty()) d << " error: " << r.error;
    out.push_back({"fixture:" + r.name, r.passed, d.str()});
  }
  return out;
}

int cmd_verify(const Common& c, const VerifyArgs& a) {
  const Config cfg = load_config(c);
  apply_threads(c.threads);
  std::vector<Check> checks;
  checks.push_back(check_param_count(c, cfg));
  checks.push_back(check_rate_identity(c.seed));
  checks.push_back(check_pqmf(cfg, a, c.seed));
  checks.push_back(check_losses(cfg, c.seed));
  checks.push_back(check_determinism(c.seed));
  if (!a.fixtures.empty()) {
    for (auto& k : check_fixtures(a.fixtures)) checks.push_back(std::move(k));
  }
  bool ok = true;
  for (const auto& k : checks) ok = ok && k.passed;
  if (c.json) {
    json arr = json::array();
    for (const auto& k : checks) arr.push_back({{"name", k.name}, {"passed", k.passed}, {"detail", k.detail}});
    std::cout << json{{"passed", ok}, {"checks", arr}}.dump(2) << "\n";
  } else {
    for (const auto& k : checks) std::cout << (k.passed ? "PASS " : "FAIL ") << k.name << ": " << k.detail << "\n";
    std::cout << (ok ? "all checks passed\n" : "verification FAILED\n");
  }
  return ok ? kOk : kVerifyFailed;
}

// ---- init ----------------------------------------------------------------

int cmd_init(const Common& c, const std::string& out, bool discriminators) {
  const Config cfg = load_config(c);
  auto layout = discriminators ? discriminator_layout(cfg) : generator_layout(cfg);
  const WeightBundle b = random_bundle(layout, c.seed);
  save_bundle(b, out);
  std::cout << "wrote " << out << ": " << b.size() << " tensors, " << layout_parameter_count(layout)
            << " parameters\n";
  return kOk;
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Io:
    case ErrorKind::Format:
    case ErrorKind::Data:
      return kIo;
    case ErrorKind::Config:
    case ErrorKind::Input:
      return kUsage;
  }
  return kUsage;
}

}  // namespace

std::vector<std::size_t> parse_ids(const std::string& text, const std::string& what) {
  std::vector<std::size_t> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    if (tok.find_first_not_of("0123456789") != std::string::npos || tok.size() > 9) {
      throw InputError("cli", what + ": '" + tok + "' is not a non-negative integer");
    }
    out.push_back(static_cast<std::size_t>(std::stoul(tok)));
  }
  return out;
}

std::vector<float> parse_floats(const std::string& text, const std::string& what) {
  std::vector<float> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    float v = 0.0f;
    try {
      v = std::stof(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || !std::isfinite(v)) throw InputError("cli", what + ": '" + tok + "' is not a number");
    out.push_back(v);
  }
  return out;
}

std::pair<PhonemeSequence, DurationSequence> bench_utterance(const Config& cfg, double seconds) {
  if (!(seconds > 0.0)) throw InputError("cli", "bench needs a positive synthesis length");
  const auto hop = static_cast<double>(cfg.acoustic.frame_hop);
  const auto frames = static_cast<std::size_t>(std::ceil(seconds * cfg.acoustic.sample_rate / hop));
  constexpr std::size_t kFramesPerPhoneme = 10;
  const std::size_t n = std::max<std::size_t>(1, frames / kFramesPerPhoneme);
  PhonemeSequence seq;
  DurationSequence dur;
  for (std::size_t i = 0; i < n; ++i) {
    seq.ids.push_back((7 * i + 1) % cfg.acoustic.vocab_size);
    dur.frames.push_back(kFramesPerPhoneme);
  }
  dur.frames.back() += frames - n * kFramesPerPhoneme;
  return {seq, dur};
}

BenchReport run_bench(const Synthesizer& synth, double seconds, int runs) {
  const auto [seq, dur] = bench_utterance(synth.config(), seconds);
  BenchReport r;
  r.threads = static_cast<int>(num_threads());
  std::size_t samples = synth.run(seq, dur).waveform.size();  // warm-up
  for (int i = 0; i < runs; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    samples = synth.run(seq, dur).waveform.size();
    r.wall_seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    spdlog::debug("bench run {}: {:.4f} s", i, r.wall_seconds.back());
  }
  r.synthesized_seconds = static_cast<double>(samples) / static_cast<double>(synth.config().acoustic.sample_rate);
  double sum = 0.0;
  for (double w : r.wall_seconds) sum += w;
  r.wall_mean = sum / static_cast<double>(r.wall_seconds.size());
  double var = 0.0;
  for (double w : r.wall_seconds) var += (w - r.wall_mean) * (w - r.wall_mean);
  r.wall_stddev = r.wall_seconds.size() > 1 ? std::sqrt(var / static_cast<double>(r.wall_seconds.size() - 1)) : 0.0;
  r.rtf = r.wall_mean / r.synthesized_seconds;
  return r;
}

int run(int argc, char** argv) {
  setup_logging();
  CLI::App app{"le2e: lightweight end-to-end TTS inference engine"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--weights", common.weights, "Weight bundle (.le2e)");
    sub->add_option("--config", common.config, "Model configuration (JSON)");
    sub->add_option("--seed", common.seed, "Seed for random weights and signals");
    sub->add_option("--threads", common.threads, "Kernel thread count (0: OpenMP default)")->check(CLI::NonNegativeNumber);
    sub->add_flag("--json", common.json, "Machine-readable output");
  };

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Synthesize a WAV from phoneme ids");
  add_common(s);
  s->add_option("--phonemes", synth.phonemes, "Phoneme ids, e.g. \"1 5 9\"");
  s->add_option("--phonemes-file", synth.phonemes_file, "File of whitespace-separated phoneme ids");
  s->add_option("--durations", synth.durations, "Per-phoneme frame counts overriding the predictor");
  s->add_option("--out", synth.out, "Output WAV")->required();

  double seconds = 10.0;
  int runs = 3;
  auto* b = app.add_subcommand("bench", "Measure the real-time factor");
  add_common(b);
  b->add_option("--seconds", seconds, "Audio length per run");
  b->add_option("--runs", runs, "Timed runs (>= 3), after one warm-up");

  LossArgs loss;
  auto* l = app.add_subcommand("loss-report", "Loss components for a reference/prediction pair");
  add_common(l);
  l->add_option("reference", loss.reference, "Reference WAV")->required();
  l->add_option("predicted", loss.predicted, "Predicted WAV")->required();
  l->add_option("--discriminator-weights", loss.disc_weights, "MPD/MRD bundle enabling GAN and FM terms");
  l->add_option("--dur-pred", loss.dur_pred, "Predicted log durations");
  l->add_option("--dur-oracle", loss.dur_oracle, "Oracle log durations");
  l->add_option("--pitch", loss.pitch, "Bundle with 'logits' [T,256] and 'f0' [T] (Hz)");
  l->add_option("--f0-mean", loss.f0_mean, "Pitch standardization mean (Hz)");
  l->add_option("--f0-std", loss.f0_std, "Pitch standardization std (Hz)");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Run the self-verification suite");
  add_common(v);
  v->add_option("--fixtures", verify.fixtures, "Fixture directory to check as well");
  v->add_option("--pqmf-cutoff", verify.pqmf_cutoff, "Override the PQMF cutoff for the round-trip check");

  std::string init_out;
  bool init_disc = false;
  auto* i = app.add_subcommand("init", "Write a randomly initialized weight bundle");
  add_common(i);
  i->add_option("--out", init_out, "Output bundle")->required();
  i->add_flag("--discriminators", init_disc, "Write MPD/MRD weights instead of the generator");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (s->parsed()) return cmd_synth(common, synth);
    if (b->parsed()) return cmd_bench(common, seconds, runs);
    if (l->parsed()) return cmd_loss_report(common, loss);
    if (v->parsed()) return cmd_verify(common, verify);
    if (i->parsed()) return cmd_init(common, init_out, init_disc);
  } catch (const Error& e) {
    std::cerr << "error [" << e.module() << "]: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
  return kUsage;
}

}  // namespace le2e::cli
