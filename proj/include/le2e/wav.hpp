#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "le2e/tensor.hpp"

namespace le2e {

struct WavAudio {
  Tensor samples;  // [T], in [-1, 1]
  std::uint32_t sample_rate = 22050;
};

// Mono 16-bit PCM; samples are clamped and rounded half away from zero.
std::vector<std::uint8_t> encode_wav(const Tensor& samples, std::uint32_t sample_rate);
void write_wav(const std::string& path, const Tensor& samples, std::uint32_t sample_rate);

// Accepts mono PCM16 or IEEE float32.
WavAudio decode_wav(const std::vector<std::uint8_t>& bytes);
WavAudio read_wav(const std::string& path);

std::int16_t quantize_pcm16(float x);

}  // namespace le2e
