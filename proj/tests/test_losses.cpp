#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "le2e/error.hpp"
#include "le2e/losses.hpp"
#include "le2e/signals.hpp"
#include "oracles.hpp"

using le2e::Tensor;

namespace {

Tensor scaled(const Tensor& x, float a) {
  Tensor y = x;
  for (auto& v : y.storage()) v *= a;
  return y;
}

const le2e::MrdConfig kMrd{};

}  // namespace

TEST(DurationLoss, Examples) {
  const Tensor a({2}, {0, 1});
  EXPECT_EQ(le2e::duration_loss(a, a), 0.0);
  EXPECT_DOUBLE_EQ(le2e::duration_loss(a, Tensor({2}, {0, 0})), 0.5);
  EXPECT_THROW(le2e::duration_loss(a, Tensor({3})), le2e::InputError);
}

TEST(DurationLoss, MatchesOracle) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const Tensor a = oracle::random_tensor({13}, rng, -2, 3), b = oracle::random_tensor({13}, rng, -2, 3);
    EXPECT_NEAR(le2e::duration_loss(a, b), oracle::mse(a, b), 1e-7);
  }
}

TEST(PitchQuantize, Examples) {
  const le2e::PitchQuantizer q{256, 200.0, 40.0, 4.0};
  const auto bins = le2e::pitch_quantize(Tensor({4}, {200.0f, 360.0f, 0.0f, 1000.0f}), q);
  EXPECT_EQ(bins[0], 128u);
  EXPECT_EQ(bins[1], 255u);
  EXPECT_EQ(bins[2], 0u);
  EXPECT_EQ(bins[3], 255u);
  EXPECT_THROW(le2e::pitch_quantize(Tensor({1}), le2e::PitchQuantizer{256, 0, 0, 4}), le2e::ConfigError);
}

TEST(PitchQuantize, MonotoneInRange) {
  const le2e::PitchQuantizer q{256, 150.0, 30.0, 4.0};
  std::size_t prev = 0;
  for (float f = 1.0f; f < 400.0f; f += 0.5f) {
    const auto b = le2e::pitch_quantize(Tensor({1}, f), q)[0];
    EXPECT_GE(b, prev);
    EXPECT_LT(b, 256u);
    prev = b;
  }
}

TEST(PitchCe, UniformLogits) {
  const std::vector<std::size_t> t{0, 100, 255};
  EXPECT_NEAR(le2e::pitch_ce_loss(Tensor({3, 256}, 0.3f), t), std::log(256.0), 1e-9);
}

TEST(PitchCe, Saturation) {
  Tensor logits({1, 256});
  logits[7] = 20.0f;
  const std::vector<std::size_t> t{7};
  EXPECT_LT(le2e::pitch_ce_loss(logits, t), 1e-6);
  logits[7] = 40.0f;
  EXPECT_LT(le2e::pitch_ce_loss(logits, t), 1e-8);
}

TEST(PitchCe, OutOfRangeTarget) {
  const std::vector<std::size_t> t{256};
  EXPECT_THROW(le2e::pitch_ce_loss(Tensor({1, 256}), t), le2e::InputError);
}

TEST(PitchCe, MatchesOracle) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    const Tensor logits = oracle::random_tensor({5, 256}, rng, -4, 4);
    std::vector<std::size_t> t;
    for (int j = 0; j < 5; ++j) t.push_back(std::uniform_int_distribution<std::size_t>(0, 255)(rng));
    EXPECT_NEAR(le2e::pitch_ce_loss(logits, t), oracle::cross_entropy(logits, t), 1e-6);
  }
}

TEST(Lsgan, Examples) {
  const std::vector<Tensor> ones{Tensor({4}, 1.0f), Tensor({2, 3}, 1.0f)};
  const std::vector<Tensor> zeros{Tensor({4}, 0.0f), Tensor({2, 3}, 0.0f)};
  const std::vector<Tensor> half{Tensor({4}, 0.5f), Tensor({2, 3}, 0.5f)};
  EXPECT_EQ(le2e::lsgan_d_loss(ones, zeros), 0.0);
  EXPECT_DOUBLE_EQ(le2e::lsgan_d_loss(half, half), 0.5);
  EXPECT_EQ(le2e::lsgan_g_loss(ones), 0.0);
  EXPECT_DOUBLE_EQ(le2e::lsgan_g_loss(half), 0.25);
  EXPECT_THROW(le2e::lsgan_g_loss(std::vector<Tensor>{}), le2e::InputError);
  EXPECT_THROW(le2e::lsgan_d_loss(std::vector<Tensor>{}, std::vector<Tensor>{}), le2e::InputError);
}

TEST(Lsgan, ClosedFormForConstantScores) {
  for (double c = -1.0; c <= 2.0; c += 0.125) {
    const std::vector<Tensor> s{Tensor({3}, static_cast<float>(c)), Tensor({5}, static_cast<float>(c))};
    EXPECT_NEAR(le2e::lsgan_d_loss(s, s) + le2e::lsgan_g_loss(s), (c - 1) * (c - 1) + c * c + (c - 1) * (c - 1), 1e-12);
  }
}

TEST(Lsgan, MatchesOracle) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    std::vector<Tensor> r, f;
    for (int k = 0; k < 4; ++k) {
      r.push_back(oracle::random_tensor({1, 7, 3 + std::size_t(k)}, rng));
      f.push_back(oracle::random_tensor({1, 7, 3 + std::size_t(k)}, rng));
    }
    EXPECT_NEAR(le2e::lsgan_d_loss(r, f), oracle::lsgan_d(r, f), 1e-7);
    EXPECT_NEAR(le2e::lsgan_g_loss(f), oracle::lsgan_g(f), 1e-7);
  }
}

TEST(FeatureMatching, Examples) {
  std::mt19937_64 rng(4);
  const le2e::FeatureNest a{{oracle::random_tensor({3, 4}, rng), oracle::random_tensor({5}, rng)}};
  EXPECT_EQ(le2e::feature_matching_loss(a, a), 0.0);
  const Tensor f = oracle::random_tensor({6}, rng);
  Tensor r = f;
  for (auto& v : r.storage()) v += 1.0f;
  EXPECT_NEAR(le2e::feature_matching_loss({{r}}, {{f}}), 1.0, 1e-6);
  EXPECT_THROW(le2e::feature_matching_loss({{Tensor({3})}}, {{Tensor({4})}}), le2e::InputError);
  EXPECT_THROW(le2e::feature_matching_loss({{Tensor({3})}}, {{Tensor({3}), Tensor({3})}}), le2e::InputError);
}

TEST(FeatureMatching, MatchesOracle) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    le2e::FeatureNest a, b;
    for (int k = 0; k < 3; ++k) {
      a.emplace_back();
      b.emplace_back();
      for (int l = 0; l < 4; ++l) {
        a.back().push_back(oracle::random_tensor({2, 3 + std::size_t(l)}, rng));
        b.back().push_back(oracle::random_tensor({2, 3 + std::size_t(l)}, rng));
      }
    }
    EXPECT_NEAR(le2e::feature_matching_loss(a, b), oracle::feature_l1(a, b), 1e-6);
  }
}

TEST(SpectralConvergence, Examples) {
  std::mt19937_64 rng(6);
  const Tensor s = oracle::random_tensor({10, 9}, rng, 0.1f, 2.0f);
  EXPECT_EQ(le2e::spectral_convergence(s, s), 0.0);
  EXPECT_NEAR(le2e::spectral_convergence(s, scaled(s, 2.0f)), 1.0, 1e-12);
  EXPECT_THROW(le2e::spectral_convergence(Tensor({3}), Tensor({3})), le2e::InputError);
}

TEST(SpectralConvergence, ScaleDetecting) {
  std::mt19937_64 rng(7);
  const Tensor s = oracle::random_tensor({20, 17}, rng, 0.01f, 3.0f);
  for (float a : {0.25f, 0.5f, 1.5f, 3.0f}) {
    EXPECT_NEAR(le2e::spectral_convergence(s, scaled(s, a)), std::abs(1.0 - a), 1e-6);
    EXPECT_NEAR(le2e::stft_magnitude_loss(s, scaled(s, a)), std::abs(std::log(static_cast<double>(a))), 1e-6);
  }
}

TEST(MagnitudeLoss, Examples) {
  const Tensor s({6}, 0.5f);
  EXPECT_EQ(le2e::stft_magnitude_loss(s, s), 0.0);
  EXPECT_NEAR(le2e::stft_magnitude_loss(s, scaled(s, 2.0f)), std::log(2.0), 1e-7);
  // both below the floor: no difference
  EXPECT_EQ(le2e::stft_magnitude_loss(Tensor({2}, 1e-7f), Tensor({2}, 0.0f)), 0.0);
}

TEST(SpectralLosses, MatchOracle) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    const Tensor a = oracle::random_tensor({8, 9}, rng, 0.0f, 2.0f), b = oracle::random_tensor({8, 9}, rng, 0.0f, 2.0f);
    EXPECT_NEAR(le2e::spectral_convergence(a, b), oracle::spectral_convergence(oracle::to_vec(a), oracle::to_vec(b)), 1e-6);
    EXPECT_NEAR(le2e::stft_magnitude_loss(a, b), oracle::log_mag(oracle::to_vec(a), oracle::to_vec(b)), 1e-6);
  }
}

TEST(MrStft, IdentityAndDoubling) {
  const Tensor x = le2e::white_noise(6000, 9, 0.3f);
  const auto res = le2e::full_band_resolutions(kMrd);
  EXPECT_EQ(le2e::mr_stft_loss(x, x, res), 0.0);
  // |s| stays above the floor for this noise level, so each resolution adds 1 + ln 2
  EXPECT_NEAR(le2e::mr_stft_loss(x, scaled(x, 2.0f), res), 1.0 + std::log(2.0), 1e-5);
}

TEST(MrStft, ShortSignalIsInputError) {
  EXPECT_THROW(le2e::mr_stft_loss(Tensor({1000}), Tensor({1000}), le2e::full_band_resolutions(kMrd)), le2e::InputError);
}

TEST(MrStft, MatchesComposedOracle) {
  std::mt19937_64 rng(10);
  const std::vector<oracle::Resolution> ores{{128, 30, 100}, {64, 12, 48}};
  std::vector<le2e::StftConfig> res;
  for (const auto& r : ores) res.push_back(le2e::StftConfig::hann(r.fft, r.hop, r.win));
  for (int i = 0; i < 20; ++i) {
    const Tensor x = oracle::random_tensor({400}, rng), y = oracle::random_tensor({400}, rng);
    EXPECT_NEAR(le2e::mr_stft_loss(x, y, res), oracle::mr_stft(x, y, ores), 1e-5);
  }
}

TEST(MrStft, SubBandResolutions) {
  const auto sub = le2e::sub_band_resolutions(kMrd, 4);
  ASSERT_EQ(sub.size(), 3u);
  EXPECT_EQ(sub[0].fft_size, 256u);
  EXPECT_EQ(sub[0].hop_length, 30u);
  EXPECT_EQ(sub[0].win_length, 150u);
  EXPECT_EQ(sub[2].fft_size, 128u);
  EXPECT_EQ(sub[2].hop_length, 12u);
  EXPECT_EQ(sub[2].win_length, 60u);
  le2e::MrdConfig small;
  small.fft_sizes = {64};
  small.hop_lengths = {16};
  small.win_lengths = {64};
  const auto clamped = le2e::sub_band_resolutions(small, 4);
  EXPECT_EQ(clamped[0].fft_size, 32u);
  EXPECT_EQ(clamped[0].hop_length, 8u);
  EXPECT_EQ(clamped[0].win_length, 32u);
}

TEST(MrStftFullSub, IdentityAndMean) {
  const auto pqmf = le2e::PqmfBank::design(le2e::PqmfConfig{});
  const Tensor x = le2e::white_noise(8000, 11, 0.2f);
  const auto same = le2e::mr_stft_full_sub(x, x, pqmf, kMrd);
  EXPECT_EQ(same.full, 0.0);
  EXPECT_EQ(same.sub, 0.0);
  EXPECT_EQ(same.combined, 0.0);
  const auto diff = le2e::mr_stft_full_sub(x, le2e::white_noise(8000, 12, 0.2f), pqmf, kMrd);
  EXPECT_DOUBLE_EQ(diff.combined, (diff.full + diff.sub) / 2.0);
  EXPECT_GT(diff.sub, 0.0);
}

TEST(MrStftFullSub, SubBandTermMatchesOracle) {
  const auto pqmf = le2e::PqmfBank::design(le2e::PqmfConfig{});
  const Tensor x = le2e::white_noise(4800, 13, 0.2f), y = le2e::white_noise(4800, 14, 0.2f);
  const auto got = le2e::mr_stft_full_sub(x, y, pqmf, kMrd);
  const auto bx = pqmf.analysis(x), by = pqmf.analysis(y);
  const std::vector<oracle::Resolution> sub{{256, 30, 150}, {512, 60, 300}, {128, 12, 60}};
  double acc = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    const Tensor a({bx.length()}, std::vector<float>(bx.bands.row(k).begin(), bx.bands.row(k).end()));
    const Tensor b({by.length()}, std::vector<float>(by.bands.row(k).begin(), by.bands.row(k).end()));
    acc += oracle::mr_stft(a, b, sub);
  }
  EXPECT_NEAR(got.sub, acc / 4.0, 1e-5);
  EXPECT_NEAR(got.full, oracle::mr_stft(x, y, {{1024, 120, 600}, {2048, 240, 1200}, {512, 50, 240}}), 1e-5);
}

TEST(MelLoss, IdentityAndSilence) {
  const le2e::MelConfig mc;
  const auto cfg = le2e::mel_stft_config(mc);
  const auto fb = le2e::mel_filterbank(mc, 22050.0);
  const Tensor x = le2e::white_noise(5000, 15, 0.3f);
  EXPECT_EQ(le2e::mel_loss(x, x, cfg, fb), 0.0);
  const auto m = oracle::log_mel(x, 1024, 256, 1024, 80, 22050, 0, 8000);
  double want = 0.0;
  for (double v : m) want += std::abs(v - std::log(1e-5));
  want /= static_cast<double>(m.size());
  EXPECT_NEAR(le2e::mel_loss(x, Tensor({5000}), cfg, fb), want, 1e-5);
}

TEST(MelLoss, MatchesOracle) {
  const le2e::MelConfig mc;
  const auto cfg = le2e::mel_stft_config(mc);
  const auto fb = le2e::mel_filterbank(mc, 22050.0);
  std::mt19937_64 rng(16);
  for (int i = 0; i < 3; ++i) {
    const Tensor x = oracle::random_tensor({2048}, rng, -0.5f, 0.5f), y = oracle::random_tensor({2048}, rng, -0.5f, 0.5f);
    const auto mx = oracle::log_mel(x, 1024, 256, 1024, 80, 22050, 0, 8000);
    const auto my = oracle::log_mel(y, 1024, 256, 1024, 80, 22050, 0, 8000);
    double want = 0.0;
    for (std::size_t j = 0; j < mx.size(); ++j) want += std::abs(mx[j] - my[j]);
    EXPECT_NEAR(le2e::mel_loss(x, y, cfg, fb), want / static_cast<double>(mx.size()), 1e-5);
  }
}

TEST(TotalLoss, Examples) {
  const le2e::LossWeights w;
  EXPECT_EQ(le2e::total_generator_loss(le2e::LossReport{}, w), 0.0);
  const le2e::LossReport unit{1, 1, 1, 1, 1, 1, 1, 1, 0};
  EXPECT_DOUBLE_EQ(le2e::total_generator_loss(unit, w), 12.5);
}

TEST(TotalLoss, LinearWithLambdaCoefficients) {
  const le2e::LossWeights w;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    le2e::LossReport r{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), 0};
    const double base = le2e::total_generator_loss(r, w);
    const double want = r.dur + r.f0 + r.gan_g + 2.0 * r.fm + 5.0 * r.mel + 2.5 * (r.stft_full + r.stft_sub) / 2.0;
    EXPECT_NEAR(base, want, 1e-9);
    const double delta = 0.125;
    double le2e::LossReport::*fields[] = {&le2e::LossReport::dur, &le2e::LossReport::f0, &le2e::LossReport::gan_g,
                                          &le2e::LossReport::fm, &le2e::LossReport::mel, &le2e::LossReport::stft_full,
                                          &le2e::LossReport::stft_sub, &le2e::LossReport::gan_d};
    const double lambdas[] = {1, 1, 1, 2, 5, 1.25, 1.25, 0};
    for (std::size_t f = 0; f < 8; ++f) {
      le2e::LossReport bumped = r;
      bumped.*fields[f] += delta;
      EXPECT_NEAR(le2e::total_generator_loss(bumped, w) - base, lambdas[f] * delta, 1e-9) << "field " << f;
    }
  }
}

TEST(TotalLoss, NanNamesComponent) {
  le2e::LossReport r;
  r.mel = NAN;
  try {
    le2e::total_generator_loss(r, le2e::LossWeights{});
    FAIL();
  } catch (const le2e::InputError& e) {
    EXPECT_NE(std::string(e.what()).find("mel"), std::string::npos);
  }
}

TEST(Losses, NonNegativeOnRandomInputs) {
  std::mt19937_64 rng(18);
  const auto pqmf = le2e::PqmfBank::design(le2e::PqmfConfig{});
  for (int i = 0; i < 3; ++i) {
    const Tensor x = oracle::random_tensor({5000}, rng, -0.5f, 0.5f), y = oracle::random_tensor({5000}, rng, -0.5f, 0.5f);
    const auto fs = le2e::mr_stft_full_sub(x, y, pqmf, kMrd);
    EXPECT_GE(fs.full, 0.0);
    EXPECT_GE(fs.sub, 0.0);
    EXPECT_GE(le2e::duration_loss(x, y), 0.0);
  }
}
