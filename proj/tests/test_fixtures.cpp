#include <filesystem>
#include <random>

#include <gtest/gtest.h>

#include "le2e/error.hpp"
#include "le2e/fixture.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using le2e::Tensor;

namespace {

le2e::Fixture conv_fixture() {
  std::mt19937_64 rng(1);
  le2e::Fixture f;
  f.name = "conv";
  f.op = "conv1d";
  f.oracle = "naive";
  f.seed = 1;
  f.tolerance = 1e-5;
  f.params_json = R"({"dilation": 2, "groups": 1})";
  const Tensor x = oracle::random_tensor({3, 20}, rng), w = oracle::random_tensor({4, 3, 3}, rng),
               b = oracle::random_tensor({4}, rng);
  f.inputs.add("x", x);
  f.inputs.add("w", w);
  f.inputs.add("b", b);
  const auto want = oracle::conv1d(x, w, b, 2, 1);
  f.expected.add("y", Tensor({4, 20}, std::vector<float>(want.begin(), want.end())));
  return f;
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("le2e_fixture_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Fixture, SaveLoadLayout) {
  const auto dir = scratch("layout");
  le2e::save_fixture((dir / "conv").string(), conv_fixture());
  EXPECT_TRUE(fs::exists(dir / "conv" / "inputs.le2e"));
  EXPECT_TRUE(fs::exists(dir / "conv" / "expected.le2e"));
  EXPECT_TRUE(fs::exists(dir / "conv" / "meta.json"));
  const auto f = le2e::load_fixture((dir / "conv").string());
  EXPECT_EQ(f.name, "conv");
  EXPECT_EQ(f.op, "conv1d");
  EXPECT_EQ(f.seed, 1u);
  EXPECT_EQ(f.tolerance, 1e-5);
  EXPECT_EQ(f.inputs.size(), 3u);
  fs::remove_all(dir);
}

TEST(Fixture, SetIsSortedAndSkipsStrays) {
  const auto dir = scratch("set");
  le2e::save_fixture((dir / "b").string(), conv_fixture());
  le2e::save_fixture((dir / "a").string(), conv_fixture());
  fs::create_directories(dir / "not_a_fixture");
  const auto set = le2e::load_fixture_set(dir.string());
  ASSERT_EQ(set.size(), 2u);
  EXPECT_EQ(set[0].name, "a");
  EXPECT_EQ(set[1].name, "b");
  fs::remove_all(dir);
}

TEST(Fixture, RunnerPassesAndFails) {
  auto f = conv_fixture();
  const auto ok = le2e::run_fixture(f);
  EXPECT_TRUE(ok.passed) << ok.error;
  ASSERT_EQ(ok.max_abs_diff.size(), 1u);
  EXPECT_LT(ok.max_abs_diff[0].second, 1e-5);

  le2e::Fixture bad = conv_fixture();
  le2e::WeightBundle shifted;
  Tensor y = bad.expected.get("y");
  y[0] += 0.1f;
  shifted.add("y", y);
  bad.expected = shifted;
  const auto r = le2e::run_fixture(bad);
  EXPECT_FALSE(r.passed);
  EXPECT_NEAR(r.max_abs_diff[0].second, 0.1, 1e-5);
}

TEST(Fixture, UnknownOpIsReported) {
  auto f = conv_fixture();
  f.op = "bogus";
  const auto r = le2e::run_fixture(f);
  EXPECT_FALSE(r.passed);
  EXPECT_FALSE(r.error.empty());
}

TEST(Fixture, MissingMetaIsError) {
  const auto dir = scratch("nometa");
  fs::create_directories(dir);
  EXPECT_THROW(le2e::load_fixture(dir.string()), le2e::Error);
  fs::remove_all(dir);
}

TEST(Fixture, CheckedInSetPasses) {
  const auto set = le2e::load_fixture_set(LE2E_FIXTURE_DIR);
  ASSERT_FALSE(set.empty());
  for (const auto& f : set) {
    const auto r = le2e::run_fixture(f);
    EXPECT_TRUE(r.passed) << f.name << ": " << r.error;
  }
}
