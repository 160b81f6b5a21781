#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "le2e/acoustic.hpp"
#include "le2e/error.hpp"
#include "le2e/layout.hpp"
#include "le2e/numerics.hpp"
#include "oracles.hpp"

using le2e::Tensor;

namespace {

le2e::Config tiny() { return le2e::Config::tiny(); }

le2e::AcousticWeights random_weights(const le2e::ModelConfig& cfg, std::uint64_t seed) {
  le2e::Config c = tiny();
  c.acoustic = cfg;
  return le2e::AcousticWeights::from_bundle(le2e::random_bundle(le2e::generator_layout(c), seed), cfg);
}

le2e::AcousticWeights zero_weights(const le2e::ModelConfig& cfg) {
  le2e::LayoutRecorder rec;  // hands out zero tensors
  return le2e::AcousticWeights::load(rec, cfg);
}

}  // namespace

TEST(Embedding, ZeroTableGivesPositionCode) {
  const Tensor e = le2e::embed_phonemes({{0}}, Tensor({4, 8}));
  for (std::size_t c = 0; c < 8; ++c) EXPECT_FLOAT_EQ(e[c], c % 2 == 0 ? 0.0f : 1.0f);
}

TEST(Embedding, SamePhonemeDiffersOnlyByPosition) {
  std::mt19937_64 rng(1);
  const Tensor table = oracle::random_tensor({5, 16}, rng);
  const Tensor e = le2e::embed_phonemes({{3, 3}}, table);
  const auto p0 = le2e::sinusoidal_position(0, 16), p1 = le2e::sinusoidal_position(1, 16);
  for (std::size_t c = 0; c < 16; ++c) EXPECT_NEAR(e.at(0, c) - p0[c], e.at(1, c) - p1[c], 1e-6);
}

TEST(Embedding, LookupMatchesOracle) {
  Tensor table({3, 6});
  for (std::size_t r = 0; r < 3; ++r) table.at(r, r) = static_cast<float>(r + 1) * 10.0f;
  const Tensor e = le2e::embed_phonemes({{1, 2, 1}}, table);
  const std::size_t ids[] = {1, 2, 1};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t c = 0; c < 6; ++c) {
      const double j = static_cast<double>(c / 2 * 2);
      const double angle = static_cast<double>(i) / std::pow(10000.0, j / 6.0);
      const double pos = c % 2 == 0 ? std::sin(angle) : std::cos(angle);
      EXPECT_FLOAT_EQ(e.at(i, c), static_cast<float>(table.at(ids[i], c) + pos));
    }
  }
}

TEST(Embedding, OutOfRangeIdIsInputError) {
  EXPECT_THROW(le2e::embed_phonemes({{0, 4}}, Tensor({4, 8})), le2e::InputError);
  EXPECT_THROW(le2e::embed_phonemes({{}}, Tensor({4, 8})), le2e::InputError);
}

TEST(Transformer, ZeroWeightsGiveLayerNormChain) {
  const auto cfg = tiny().acoustic;
  const auto w = zero_weights(cfg);
  std::mt19937_64 rng(2);
  const Tensor x = oracle::random_tensor({5, cfg.hidden}, rng);
  const Tensor y = le2e::transformer_stack_forward(x, w.encoder, cfg.encoder_kernels, cfg.heads);
  // zero gamma/beta collapse every row to zeros after the first norm
  EXPECT_EQ(y.shape(), x.shape());
  EXPECT_TRUE(y.all_finite());
  for (float v : y.values()) EXPECT_EQ(v, 0.0f);
}

TEST(Transformer, UnitNormsAndZeroProjectionsNormalizeInput) {
  const auto cfg = tiny().acoustic;
  auto w = zero_weights(cfg);
  for (auto& b : w.encoder) {
    std::fill(b.attn_norm.gamma.storage().begin(), b.attn_norm.gamma.storage().end(), 1.0f);
    std::fill(b.conv_norm.gamma.storage().begin(), b.conv_norm.gamma.storage().end(), 1.0f);
  }
  std::mt19937_64 rng(3);
  const Tensor x = oracle::random_tensor({4, cfg.hidden}, rng);
  const Tensor y = le2e::transformer_stack_forward(x, w.encoder, cfg.encoder_kernels, cfg.heads);
  const Tensor g({cfg.hidden}, 1.0f), b({cfg.hidden}, 0.0f);
  Tensor want = x;
  for (int i = 0; i < 8; ++i) want = le2e::layer_norm(want, g, b);
  EXPECT_LT(le2e::max_abs_diff(y, want), 1e-5);
}

TEST(Transformer, SingleFrame) {
  const auto cfg = tiny().acoustic;
  const auto w = random_weights(cfg, 4);
  std::mt19937_64 rng(4);
  const Tensor y = le2e::transformer_stack_forward(oracle::random_tensor({1, cfg.hidden}, rng), w.decoder,
                                                   cfg.decoder_kernels, cfg.heads);
  EXPECT_TRUE(y.all_finite());
}

TEST(Transformer, BlockCountMismatchIsConfigError) {
  const auto cfg = tiny().acoustic;
  const auto w = random_weights(cfg, 5);
  const std::size_t kernels[] = {5, 25, 13};
  EXPECT_THROW(le2e::transformer_stack_forward(Tensor({2, cfg.hidden}), w.encoder, kernels, 2), le2e::ConfigError);
}

TEST(Durations, DecodeConvention) {
  const auto d = le2e::decode_durations(Tensor({3}, {0.0f, std::log(4.0f), -3.0f}));
  EXPECT_EQ(d.frames, (std::vector<std::size_t>{0, 3, 0}));
}

TEST(Durations, ZeroWeightsPredictZero) {
  const auto cfg = tiny().acoustic;
  const auto w = zero_weights(cfg);
  const Tensor d = le2e::predict_durations(Tensor({3, cfg.hidden}, 0.7f), w.duration);
  for (float v : d.values()) EXPECT_EQ(v, 0.0f);
  EXPECT_EQ(le2e::decode_durations(d).total(), 0u);
}

TEST(LengthRegulator, Examples) {
  Tensor enc({3, 2}, {0, 0, 1, 1, 2, 2});
  const Tensor y = le2e::length_regulate(enc, {{2, 1, 3}});
  ASSERT_EQ(y.dim(0), 6u);
  const float want[] = {0, 0, 1, 2, 2, 2};
  for (std::size_t t = 0; t < 6; ++t) EXPECT_EQ(y.at(t, 0), want[t]);
  EXPECT_EQ(le2e::length_regulate(enc, {{1, 1, 1}}), enc);
  const Tensor z = le2e::length_regulate(Tensor({2, 2}, {0, 0, 1, 1}), {{0, 5}});
  ASSERT_EQ(z.dim(0), 5u);
  for (float v : z.values()) EXPECT_EQ(v, 1.0f);
}

TEST(LengthRegulator, Errors) {
  EXPECT_THROW(le2e::length_regulate(Tensor({2, 2}), {{0, 0}}), le2e::InputError);
  EXPECT_THROW(le2e::length_regulate(Tensor({2, 2}), {{1}}), le2e::InputError);
}

TEST(LengthRegulator, LengthIsSumOfDurations) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 20)(rng);
    le2e::DurationSequence d;
    for (std::size_t i = 0; i < n; ++i) d.frames.push_back(std::uniform_int_distribution<std::size_t>(0, 6)(rng));
    d.frames[n - 1] += 1;
    const Tensor enc = oracle::random_tensor({n, 3}, rng);
    const Tensor y = le2e::length_regulate(enc, d);
    ASSERT_EQ(y.dim(0), std::accumulate(d.frames.begin(), d.frames.end(), std::size_t{0}));
    std::size_t t = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t r = 0; r < d.frames[i]; ++r, ++t) EXPECT_EQ(y.at(t, 1), enc.at(i, 1));
  }
}

TEST(Pitch, ZeroWeightsGiveConstantLatents) {
  const auto cfg = tiny().acoustic;
  const auto w = zero_weights(cfg);
  std::mt19937_64 rng(7);
  const Tensor up = oracle::random_tensor({6, cfg.hidden}, rng);
  const auto p = le2e::pitch_forward(up, w.pitch);
  EXPECT_EQ(p.enriched, up);
  EXPECT_EQ(p.logits.shape(), (le2e::Shape{6, 256}));
}

TEST(Pitch, EnrichmentIsAdditive) {
  const auto cfg = tiny().acoustic;
  const auto w = random_weights(cfg, 8);
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const Tensor a = oracle::random_tensor({9, cfg.hidden}, rng);
    const Tensor b = oracle::random_tensor({9, cfg.hidden}, rng);
    const auto pa = le2e::pitch_forward(a, w.pitch), pb = le2e::pitch_forward(b, w.pitch);
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_NEAR(pa.enriched[i] - a[i], pa.latents[i], 1e-6);
      EXPECT_NEAR(pa.enriched[i] - pb.enriched[i], (a[i] - b[i]) + (pa.latents[i] - pb.latents[i]), 1e-5);
    }
  }
}

TEST(AcousticModel, DurationOverrideShape) {
  const auto cfg = tiny().acoustic;
  const le2e::AcousticModel m(random_weights(cfg, 9), cfg);
  const auto out = m.forward({{3}}, le2e::DurationSequence{{4}});
  EXPECT_EQ(out.latent.frames.shape(), (le2e::Shape{4, cfg.hidden}));
  EXPECT_EQ(out.pitch_logits.shape(), (le2e::Shape{4, 256}));
}

TEST(AcousticModel, Deterministic) {
  const auto cfg = tiny().acoustic;
  const le2e::AcousticModel m(random_weights(cfg, 10), cfg);
  const le2e::PhonemeSequence seq{{1, 2, 3, 4, 5}};
  const le2e::DurationSequence d{{2, 0, 3, 1, 2}};
  EXPECT_EQ(m.forward(seq, d).latent.frames, m.forward(seq, d).latent.frames);
}

TEST(AcousticModel, PredictedDurationsDriveLength) {
  const auto cfg = tiny().acoustic;
  auto w = random_weights(cfg, 11);
  w.duration.proj_bias[0] = std::log(4.0f);  // push every phoneme to ~3 frames
  const le2e::AcousticModel m(std::move(w), cfg);
  const auto out = m.forward({{1, 2, 3}});
  EXPECT_EQ(out.latent.length(), out.durations.total());
  EXPECT_GT(out.latent.length(), 0u);
}

TEST(AcousticModel, RelabelingInvariance) {
  const auto cfg = tiny().acoustic;
  auto w = random_weights(cfg, 12);
  const le2e::PhonemeSequence seq{{0, 3, 7, 3}};
  const le2e::DurationSequence d{{1, 2, 2, 1}};
  const Tensor base = le2e::AcousticModel(w, cfg).forward(seq, d).latent.frames;

  // permutation p: new row p[i] holds old row i
  std::vector<std::size_t> perm(cfg.vocab_size);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(13);
  std::shuffle(perm.begin(), perm.end(), rng);
  Tensor table = w.embedding;
  for (std::size_t i = 0; i < cfg.vocab_size; ++i) {
    std::copy(w.embedding.row(i).begin(), w.embedding.row(i).end(), table.row(perm[i]).begin());
  }
  w.embedding = table;
  le2e::PhonemeSequence relabeled;
  for (auto id : seq.ids) relabeled.ids.push_back(perm[id]);
  EXPECT_EQ(le2e::AcousticModel(w, cfg).forward(relabeled, d).latent.frames, base);
}

TEST(AcousticModel, MissingTensorIsNamed) {
  const auto cfg = tiny();
  const auto full = le2e::random_bundle(le2e::generator_layout(cfg), 14);
  le2e::WeightBundle partial;
  for (const auto& [name, t] : full.entries()) {
    if (name != "decoder.blocks.2.attn.wk") partial.add(name, t);
  }
  try {
    le2e::AcousticModel m(partial, cfg.acoustic);
    FAIL() << "expected a configuration error";
  } catch (const le2e::ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("decoder.blocks.2.attn.wk"), std::string::npos) << e.what();
    EXPECT_EQ(e.module(), "acoustic_model");
  }
}

TEST(AcousticModel, WrongShapeIsNamed) {
  const auto cfg = tiny();
  const auto full = le2e::random_bundle(le2e::generator_layout(cfg), 15);
  le2e::WeightBundle bad;
  for (const auto& [name, t] : full.entries()) {
    bad.add(name, name == "encoder.embedding" ? Tensor({3, 3}) : t);
  }
  try {
    le2e::AcousticModel m(bad, cfg.acoustic);
    FAIL() << "expected a configuration error";
  } catch (const le2e::ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("'encoder.embedding'"), std::string::npos) << e.what();
  }
}
