#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "checks.hpp"
#include "fft.hpp"
#include "stft_detail.hpp"
#include "le2e/numerics.hpp"

namespace le2e {

StftConfig StftConfig::hann(std::size_t fft_size, std::size_t hop_length, std::size_t win_length) {
  StftConfig cfg;
  cfg.fft_size = fft_size;
  cfg.hop_length = hop_length;
  cfg.win_length = win_length;
  cfg.window.resize(win_length);
  for (std::size_t n = 0; n < win_length; ++n) {
    cfg.window[n] = static_cast<float>(
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / static_cast<double>(win_length)));
  }
  cfg.validate();
  return cfg;
}

void StftConfig::validate() const {
  using detail::require;
  require(fft_size >= 2, "numerics", "stft fft_size must be >= 2");
  require(hop_length >= 1, "numerics", "stft hop_length must be >= 1");
  require(win_length >= 1 && win_length <= fft_size, "numerics",
          "stft win_length " + std::to_string(win_length) + " must be in [1, fft_size=" +
              std::to_string(fft_size) + "]");
  require(hop_length <= win_length, "numerics", "stft hop_length must not exceed win_length");
  require(window.size() == win_length, "numerics", "stft window length must equal win_length");
}

namespace detail {

// Center-padded, windowed frame `f` written into `frame` (length fft_size).
void fill_frame(const Tensor& audio, const StftConfig& cfg, std::size_t f, double* frame) {
  const auto len = static_cast<std::ptrdiff_t>(audio.size());
  const auto half = static_cast<std::ptrdiff_t>(cfg.fft_size / 2);
  const std::size_t offset = (cfg.fft_size - cfg.win_length) / 2;
  for (std::size_t n = 0; n < cfg.fft_size; ++n) frame[n] = 0.0;
  for (std::size_t n = 0; n < cfg.win_length; ++n) {
    const std::ptrdiff_t src =
        static_cast<std::ptrdiff_t>(f * cfg.hop_length + offset + n) - half;
    frame[offset + n] = static_cast<double>(audio[static_cast<std::size_t>(reflect_index(src, len))]) *
                        static_cast<double>(cfg.window[n]);
  }
}

void check_stft_input(const Tensor& audio, const StftConfig& cfg) {
  cfg.validate();
  require_rank(audio, 1, "numerics", "stft audio");
  if (audio.size() < cfg.win_length) {
    throw InputError("numerics", "audio of " + std::to_string(audio.size()) +
                                     " samples is shorter than one window (" +
                                     std::to_string(cfg.win_length) + ")");
  }
}

}  // namespace detail

Tensor stft(const Tensor& audio, const StftConfig& cfg) {
  detail::check_stft_input(audio, cfg);
  const std::size_t frames = cfg.frames(audio.size()), bins = cfg.bins(), n = cfg.fft_size;
  Tensor out({frames, bins});
  const bool fast = detail::FftPlan::supports(n);
  const detail::FftPlan plan(fast ? n : 1);
  const auto nf = static_cast<std::ptrdiff_t>(frames);
#pragma omp parallel
  {
    std::vector<double> frame(n);
    std::vector<std::complex<double>> spec(n);
#pragma omp for schedule(static)
    for (std::ptrdiff_t f = 0; f < nf; ++f) {
      detail::fill_frame(audio, cfg, static_cast<std::size_t>(f), frame.data());
      float* dst = out.data() + static_cast<std::size_t>(f) * bins;
      if (fast) {
        for (std::size_t i = 0; i < n; ++i) spec[i] = {frame[i], 0.0};
        plan.forward(spec.data());
        for (std::size_t k = 0; k < bins; ++k) dst[k] = static_cast<float>(std::abs(spec[k]));
      } else {
        for (std::size_t k = 0; k < bins; ++k) {
          std::complex<double> acc{};
          for (std::size_t i = 0; i < n; ++i) {
            const double a = -2.0 * std::numbers::pi * static_cast<double>(k * i % n) / static_cast<double>(n);
            acc += frame[i] * std::complex<double>(std::cos(a), std::sin(a));
          }
          dst[k] = static_cast<float>(std::abs(acc));
        }
      }
    }
  }
  return out;
}

}  // namespace le2e
