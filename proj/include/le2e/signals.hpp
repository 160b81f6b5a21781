#pragma once

#include <cstdint>

#include "le2e/tensor.hpp"

namespace le2e {

// Gaussian white noise, N(0, sigma^2), from a seeded mt19937_64.
Tensor white_noise(std::size_t n, std::uint64_t seed, float sigma = 0.1f);

// Linear chirp sweeping f0 -> f1 Hz over n samples.
Tensor linear_chirp(std::size_t n, double sample_rate, double f0, double f1, float amplitude = 0.5f);

Tensor sine(std::size_t n, double sample_rate, double freq, float amplitude = 0.5f);

}  // namespace le2e
