#include <random>

#include <gtest/gtest.h>

#include "le2e/discriminators.hpp"
#include "le2e/error.hpp"
#include "le2e/layout.hpp"
#include "oracles.hpp"

using le2e::Tensor;

namespace {

le2e::Discriminators tiny_discriminators(std::uint64_t seed) {
  const auto cfg = le2e::Config::tiny();
  return le2e::Discriminators::from_bundle(le2e::random_bundle(le2e::discriminator_layout(cfg), seed), cfg);
}

}  // namespace

TEST(MpdReshape, ExactDivision) {
  Tensor x({10});
  for (std::size_t i = 0; i < 10; ++i) x[i] = static_cast<float>(i);
  const Tensor y = le2e::mpd_reshape(x, 2);
  EXPECT_EQ(y.shape(), (le2e::Shape{5, 2}));
  EXPECT_EQ(y.storage(), x.storage());
}

TEST(MpdReshape, ReflectPadsTail) {
  Tensor x({10});
  for (std::size_t i = 0; i < 10; ++i) x[i] = static_cast<float>(i);
  const Tensor y = le2e::mpd_reshape(x, 3);
  EXPECT_EQ(y.shape(), (le2e::Shape{4, 3}));
  EXPECT_EQ(y[10], 8.0f);
  EXPECT_EQ(y[11], 7.0f);
}

TEST(MpdReshape, SingleSample) {
  const Tensor y = le2e::mpd_reshape(Tensor({1}, 0.5f), 5);
  EXPECT_EQ(y.shape(), (le2e::Shape{1, 5}));
  for (float v : y.values()) EXPECT_EQ(v, 0.5f);
}

TEST(MpdReshape, FlattenRecoversPaddedSignal) {
  std::mt19937_64 rng(1);
  for (std::size_t t = 1; t < 60; t += 7) {
    const Tensor x = oracle::random_tensor({t}, rng);
    for (std::size_t p : {2, 3, 5, 7, 11}) {
      const Tensor y = le2e::mpd_reshape(x, p);
      for (std::size_t i = 0; i < t; ++i) EXPECT_EQ(y[i], x[i]);
    }
  }
}

TEST(Mpd, OutputCountAndFeatureDepth) {
  const auto d = tiny_discriminators(2);
  std::mt19937_64 rng(2);
  for (std::size_t t : {600, 1337}) {
    const auto outs = le2e::mpd_forward(oracle::random_tensor({t}, rng), d.mpd, d.mpd_cfg);
    ASSERT_EQ(outs.size(), 5u);
    for (const auto& o : outs) {
      EXPECT_EQ(o.features.size(), 6u);
      EXPECT_EQ(o.features.back(), o.score);
      EXPECT_EQ(o.score.dim(0), 1u);
    }
  }
}

TEST(Mpd, ZeroWeightsGiveBiasScores) {
  const auto cfg = le2e::Config::tiny();
  le2e::LayoutRecorder rec;
  auto w = le2e::MpdWeights::load(rec, cfg.mpd);
  for (auto& s : w.subs) s.post.bias[0] = 0.25f;
  std::mt19937_64 rng(3);
  for (const auto& o : le2e::mpd_forward(oracle::random_tensor({500}, rng), w, cfg.mpd)) {
    for (float v : o.score.values()) EXPECT_EQ(v, 0.25f);
  }
}

TEST(Mpd, MatchesConvOracleLayerByLayer) {
  const auto d = tiny_discriminators(4);
  std::mt19937_64 rng(4);
  const Tensor x = oracle::random_tensor({700}, rng);
  const auto outs = le2e::mpd_forward(x, d.mpd, d.mpd_cfg);
  for (std::size_t p = 0; p < d.mpd_cfg.periods.size(); ++p) {
    Tensor h = le2e::mpd_reshape(x, d.mpd_cfg.periods[p]);
    h = h.reshaped({1, h.dim(0), h.dim(1)});
    const auto& sub = d.mpd.subs[p];
    for (std::size_t l = 0; l <= sub.layers.size(); ++l) {
      const auto& layer = l < sub.layers.size() ? sub.layers[l] : sub.post;
      const auto& g = layer.geometry;
      auto want = oracle::conv2d(h, layer.weight, layer.bias, g.stride_h, g.stride_w, g.pad_h, g.pad_w);
      if (l < sub.layers.size())
        for (auto& v : want) v = std::max(v, 0.0);
      EXPECT_LT(oracle::max_diff(outs[p].features[l], want), 1e-4) << "period " << p << " layer " << l;
      h = outs[p].features[l];
    }
  }
}

TEST(Mrd, OutputCountAndDepth) {
  const auto d = tiny_discriminators(5);
  std::mt19937_64 rng(5);
  const auto outs = le2e::mrd_forward(oracle::random_tensor({3000}, rng), d.mrd, d.mrd_cfg);
  ASSERT_EQ(outs.size(), 3u);
  for (const auto& o : outs) EXPECT_EQ(o.features.size(), 6u);
}

TEST(Mrd, ZeroAudioScoreFromBiasesOnly) {
  const auto d = tiny_discriminators(6);
  const auto a = le2e::mrd_forward(Tensor({3000}), d.mrd, d.mrd_cfg);
  const auto b = le2e::mrd_forward(Tensor({3000}), d.mrd, d.mrd_cfg);
  for (std::size_t r = 0; r < 3; ++r) {
    EXPECT_EQ(a[r].score, b[r].score);
    EXPECT_TRUE(a[r].score.all_finite());
  }
}

TEST(Mrd, ShortAudioIsInputError) {
  const auto d = tiny_discriminators(7);
  EXPECT_THROW(le2e::mrd_forward(Tensor({1000}), d.mrd, d.mrd_cfg), le2e::InputError);
}

TEST(Discriminators, FeatureDepthIndependentOfLength) {
  const auto d = tiny_discriminators(8);
  std::mt19937_64 rng(8);
  const auto a = d.forward(oracle::random_tensor({2400}, rng));
  const auto b = d.forward(oracle::random_tensor({5000}, rng));
  ASSERT_EQ(a.size(), 8u);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].features.size(), b[k].features.size());
}

TEST(Discriminators, MissingWeightsAreConfigError) {
  EXPECT_THROW(le2e::Discriminators::from_bundle(le2e::WeightBundle{}, le2e::Config::tiny()), le2e::ConfigError);
}
