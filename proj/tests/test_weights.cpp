#include <cmath>
#include <cstring>
#include <filesystem>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "le2e/error.hpp"
#include "le2e/layout.hpp"
#include "le2e/weights.hpp"
#include "oracles.hpp"

using le2e::Tensor;
using le2e::WeightBundle;

namespace {

std::string serialize(const WeightBundle& b) {
  std::ostringstream out;
  le2e::write_bundle(b, out);
  return out.str();
}

WeightBundle parse(const std::string& bytes) {
  std::istringstream in(bytes);
  return le2e::read_bundle(in, bytes.size());
}

WeightBundle sample_bundle() {
  std::mt19937_64 rng(1);
  WeightBundle b;
  b.add("encoder.embedding", oracle::random_tensor({4, 3}, rng));
  b.add("scalar", Tensor({1}, 2.5f));
  b.add("vocoder.stem.weight", oracle::random_tensor({2, 2, 7}, rng));
  return b;
}

}  // namespace

TEST(Weights, EmptyBundleIsSixteenBytes) {
  const std::string bytes = serialize(WeightBundle{});
  ASSERT_EQ(bytes.size(), 16u);
  EXPECT_EQ(bytes.substr(0, 4), "LE2E");
  EXPECT_EQ(parse(bytes).size(), 0u);
}

TEST(Weights, RoundTripPreservesOrderAndBits) {
  const WeightBundle b = sample_bundle();
  const WeightBundle r = parse(serialize(b));
  ASSERT_EQ(r.size(), b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_EQ(r.entries()[i].first, b.entries()[i].first);
    EXPECT_EQ(r.entries()[i].second, b.entries()[i].second);
  }
}

TEST(Weights, ResaveIsByteIdentical) {
  const std::string once = serialize(sample_bundle());
  EXPECT_EQ(serialize(parse(once)), once);
}

TEST(Weights, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "le2e_weights_roundtrip.le2e";
  le2e::save_bundle(sample_bundle(), path.string());
  EXPECT_EQ(serialize(le2e::load_bundle(path.string())), serialize(sample_bundle()));
  std::filesystem::remove(path);
}

TEST(Weights, MissingFileIsIoError) {
  EXPECT_THROW(le2e::load_bundle("/nonexistent/dir/w.le2e"), le2e::IoError);
}

TEST(Weights, TruncationReportsOffset) {
  const std::string bytes = serialize(sample_bundle());
  for (std::size_t cut : {3u, 10u, 20u, 40u}) {
    const std::string head = bytes.substr(0, bytes.size() - cut);
    try {
      parse(head);
      FAIL() << "cut " << cut;
    } catch (const le2e::FormatError& e) {
      EXPECT_LE(e.offset(), head.size());
    }
  }
}

TEST(Weights, BadMagicAndVersion) {
  std::string bytes = serialize(sample_bundle());
  std::string bad = bytes;
  bad[0] = 'X';
  try {
    parse(bad);
    FAIL();
  } catch (const le2e::FormatError& e) {
    EXPECT_EQ(e.offset(), 0u);
  }
  bad = bytes;
  bad[4] = 9;
  EXPECT_THROW(parse(bad), le2e::FormatError);
}

TEST(Weights, NonFiniteIsDataError) {
  std::string bytes = serialize(WeightBundle{});
  WeightBundle b;
  b.add("x", Tensor({2}, {1.0f, 2.0f}));
  bytes = serialize(b);
  const float nan = NAN;
  std::memcpy(bytes.data() + bytes.size() - 4, &nan, 4);
  EXPECT_THROW(parse(bytes), le2e::DataError);
  WeightBundle c;
  EXPECT_THROW(c.add("y", Tensor({1}, INFINITY)), le2e::DataError);
}

TEST(Weights, DuplicateAndEmptyNames) {
  WeightBundle b;
  b.add("a", Tensor({1}));
  EXPECT_THROW(b.add("a", Tensor({1})), le2e::DataError);
  EXPECT_THROW(b.add("", Tensor({1})), le2e::DataError);
}

TEST(Weights, LookupMissing) {
  const WeightBundle b = sample_bundle();
  EXPECT_EQ(b.find("nope"), nullptr);
  EXPECT_THROW(b.get("nope"), le2e::ConfigError);
}

TEST(ParamCount, LinearExample) {
  WeightBundle b;
  b.add("decoder.proj.weight", Tensor({256, 256}));
  b.add("decoder.proj.bias", Tensor({256}));
  const auto r = le2e::count_parameters(b);
  EXPECT_EQ(r.total, 65792u);
  EXPECT_EQ(r.of("decoder"), 65792u);
  EXPECT_EQ(r.of("encoder"), 0u);
}

TEST(ParamCount, OtherBucket) {
  WeightBundle b;
  b.add("misc.x", Tensor({3}));
  b.add("encoder.y", Tensor({2}));
  const auto r = le2e::count_parameters(b);
  EXPECT_EQ(r.total, 5u);
  EXPECT_EQ(r.of("other"), 3u);
}

TEST(ParamCount, GeneratorLayoutMatchesRandomBundle) {
  const auto cfg = le2e::Config::tiny();
  const auto layout = le2e::generator_layout(cfg);
  const auto b = le2e::random_bundle(layout, 3);
  EXPECT_EQ(le2e::count_parameters(b, le2e::kGeneratorPrefixes).total, le2e::layout_parameter_count(layout));
  EXPECT_TRUE(le2e::layout_problems(b, layout).empty());
}

TEST(ParamCount, MissingDecoderIsReported) {
  const auto cfg = le2e::Config::tiny();
  const auto layout = le2e::generator_layout(cfg);
  const auto full = le2e::random_bundle(layout, 4);
  WeightBundle partial;
  for (const auto& [name, t] : full.entries())
    if (name.rfind("decoder.", 0) != 0) partial.add(name, t);
  const auto problems = le2e::layout_problems(partial, layout);
  ASSERT_FALSE(problems.empty());
  for (const auto& p : problems) EXPECT_EQ(p.rfind("decoder.", 0), 0u) << p;
  EXPECT_EQ(le2e::count_parameters(partial, le2e::kGeneratorPrefixes).of("decoder"), 0u);
}

TEST(RandomBundle, DeterministicAndInitRules) {
  const auto layout = le2e::generator_layout(le2e::Config::tiny());
  const auto a = le2e::random_bundle(layout, 5), b = le2e::random_bundle(layout, 5);
  EXPECT_EQ(serialize(a), serialize(b));
  EXPECT_NE(serialize(a), serialize(le2e::random_bundle(layout, 6)));
  for (const auto& [name, t] : a.entries()) {
    if (name.ends_with(".gamma"))
      for (float v : t.values()) EXPECT_EQ(v, 1.0f);
    if (name.ends_with(".bias") || name.ends_with(".beta"))
      for (float v : t.values()) EXPECT_EQ(v, 0.0f);
  }
}
