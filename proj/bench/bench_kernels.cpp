// Parallel kernels vs the serial reference implementations.

#include <random>

#include <benchmark/benchmark.h>

#include "le2e/numerics.hpp"
#include "le2e/parallel.hpp"
#include "le2e/reference.hpp"

namespace {

le2e::Tensor random_tensor(le2e::Shape shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
  le2e::Tensor t(std::move(shape));
  for (auto& v : t.storage()) v = dist(rng);
  return t;
}

template <bool Parallel>
void BM_Conv1d(benchmark::State& state) {
  const auto c = static_cast<std::size_t>(state.range(0));
  const auto x = random_tensor({c, 2048}, 1);
  const auto w = random_tensor({c, c, 3}, 2);
  const auto b = random_tensor({c}, 3);
  for (auto _ : state) {
    auto y = Parallel ? le2e::conv1d(x, w, b, 3) : le2e::reference::conv1d(x, w, b, 3);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c * c * 3 * 2048));
}

template <bool Parallel>
void BM_ConvTranspose1d(benchmark::State& state) {
  const auto c = static_cast<std::size_t>(state.range(0));
  const auto x = random_tensor({c, 512}, 4);
  const auto w = random_tensor({c, c / 2, 10}, 5);
  const auto b = random_tensor({c / 2}, 6);
  for (auto _ : state) {
    auto y = Parallel ? le2e::conv_transpose1d(x, w, b, 5) : le2e::reference::conv_transpose1d(x, w, b, 5);
    benchmark::DoNotOptimize(y.data());
  }
}

template <bool Parallel>
void BM_Attention(benchmark::State& state) {
  const auto t = static_cast<std::size_t>(state.range(0));
  const auto x = random_tensor({t, 256}, 7);
  const auto wq = random_tensor({256, 256}, 8);
  const auto wk = random_tensor({256, 256}, 9);
  const auto wv = random_tensor({256, 256}, 10);
  const auto wo = random_tensor({256, 256}, 11);
  for (auto _ : state) {
    auto y = Parallel ? le2e::multi_head_self_attention(x, wq, wk, wv, wo, 2)
                      : le2e::reference::multi_head_self_attention(x, wq, wk, wv, wo, 2);
    benchmark::DoNotOptimize(y.data());
  }
}

template <bool Parallel>
void BM_Stft(benchmark::State& state) {
  const auto audio = random_tensor({22050}, 12);
  const auto cfg = le2e::StftConfig::hann(1024, 256, 1024);
  for (auto _ : state) {
    auto y = Parallel ? le2e::stft(audio, cfg) : le2e::reference::stft(audio, cfg);
    benchmark::DoNotOptimize(y.data());
  }
}

}  // namespace

BENCHMARK(BM_Conv1d<false>)->Name("conv1d/reference")->Arg(48)->Arg(192);
BENCHMARK(BM_Conv1d<true>)->Name("conv1d/parallel")->Arg(48)->Arg(192);
BENCHMARK(BM_ConvTranspose1d<false>)->Name("conv_transpose1d/reference")->Arg(96)->Arg(192);
BENCHMARK(BM_ConvTranspose1d<true>)->Name("conv_transpose1d/parallel")->Arg(96)->Arg(192);
BENCHMARK(BM_Attention<false>)->Name("attention/reference")->Arg(64)->Arg(256);
BENCHMARK(BM_Attention<true>)->Name("attention/parallel")->Arg(64)->Arg(256);
BENCHMARK(BM_Stft<false>)->Name("stft/reference")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Stft<true>)->Name("stft/parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
