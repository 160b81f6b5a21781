#include <algorithm>
#include <cmath>

#include "checks.hpp"
#include "le2e/numerics.hpp"

namespace le2e {

namespace {

constexpr double kMinLogHz = 1000.0;
constexpr double kLinearStep = 200.0 / 3.0;
constexpr double kMinLogMel = kMinLogHz / kLinearStep;
const double kLogStep = std::log(6.4) / 27.0;

double hz_to_mel(double hz) {
  return hz < kMinLogHz ? hz / kLinearStep : kMinLogMel + std::log(hz / kMinLogHz) / kLogStep;
}

double mel_to_hz(double mel) {
  return mel < kMinLogMel ? mel * kLinearStep : kMinLogHz * std::exp(kLogStep * (mel - kMinLogMel));
}

}  // namespace

MelFilterbank MelFilterbank::create(std::size_t n_mels, double sample_rate, std::size_t fft_size,
                                    double f_min, double f_max) {
  using detail::require;
  require(n_mels >= 1 && fft_size >= 2, "numerics", "mel filterbank needs n_mels >= 1 and fft_size >= 2");
  require(sample_rate > 0.0 && f_min >= 0.0 && f_max > f_min && f_max <= sample_rate / 2.0, "numerics",
          "mel filterbank needs 0 <= f_min < f_max <= sample_rate/2");
  const std::size_t bins = fft_size / 2 + 1;
  std::vector<double> edges(n_mels + 2);
  const double lo = hz_to_mel(f_min), hi = hz_to_mel(f_max);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_mels + 1));
  }

  MelFilterbank fb;
  fb.n_mels = n_mels;
  fb.sample_rate = sample_rate;
  fb.f_min = f_min;
  fb.f_max = f_max;
  fb.weights = Tensor({n_mels, bins});
  for (std::size_t m = 0; m < n_mels; ++m) {
    const double norm = 2.0 / (edges[m + 2] - edges[m]);
    bool any = false;
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / static_cast<double>(fft_size);
      const double rise = (f - edges[m]) / (edges[m + 1] - edges[m]);
      const double fall = (edges[m + 2] - f) / (edges[m + 2] - edges[m + 1]);
      const double w = std::max(0.0, std::min(rise, fall)) * norm;
      fb.weights.at(m, k) = static_cast<float>(w);
      any = any || w > 0.0;
    }
    require(any, "numerics",
            "mel filter " + std::to_string(m) + " covers no FFT bin; use fewer mels or a larger fft_size");
  }
  return fb;
}

Tensor mel_from_magnitude(const Tensor& magnitude, const MelFilterbank& fb) {
  detail::require_rank(magnitude, 2, "numerics", "magnitude spectrogram");
  const std::size_t frames = magnitude.dim(0), bins = magnitude.dim(1);
  detail::require(fb.weights.rank() == 2 && fb.weights.dim(1) == bins, "numerics",
                  "mel filterbank width does not match spectrogram bins");
  Tensor mel({frames, fb.n_mels});
  const auto nf = static_cast<std::ptrdiff_t>(frames);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t f = 0; f < nf; ++f) {
    const float* mag = magnitude.data() + static_cast<std::size_t>(f) * bins;
    for (std::size_t m = 0; m < fb.n_mels; ++m) {
      const float* w = fb.weights.data() + m * bins;
      double acc = 0.0;
      for (std::size_t k = 0; k < bins; ++k) acc += static_cast<double>(w[k]) * mag[k];
      mel.at(static_cast<std::size_t>(f), m) = std::log(std::max(static_cast<float>(acc), kLogFloor));
    }
  }
  return mel;
}

Tensor mel_spectrogram(const Tensor& audio, const StftConfig& cfg, const MelFilterbank& fb) {
  return mel_from_magnitude(stft(audio, cfg), fb);
}

}  // namespace le2e
