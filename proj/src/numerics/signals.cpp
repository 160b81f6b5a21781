#include "le2e/signals.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace le2e {

Tensor white_noise(std::size_t n, std::uint64_t seed, float sigma) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, sigma);
  Tensor out({n});
  for (auto& v : out.storage()) v = static_cast<float>(dist(rng));
  return out;
}

Tensor linear_chirp(std::size_t n, double sample_rate, double f0, double f1, float amplitude) {
  Tensor out({n});
  const double duration = static_cast<double>(n) / sample_rate;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    const double phase = 2.0 * std::numbers::pi * (f0 * t + (f1 - f0) * t * t / (2.0 * duration));
    out[i] = amplitude * static_cast<float>(std::sin(phase));
  }
  return out;
}

Tensor sine(std::size_t n, double sample_rate, double freq, float amplitude) {
  Tensor out({n});
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = amplitude * static_cast<float>(std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(i) / sample_rate));
  }
  return out;
}

}  // namespace le2e
