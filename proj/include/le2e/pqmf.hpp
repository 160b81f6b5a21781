#pragma once

#include <cstddef>
#include <vector>

#include "le2e/config.hpp"
#include "le2e/tensor.hpp"

namespace le2e {

struct SubBandWaveform {
  Tensor bands;             // [subbands, L]
  std::size_t padding = 0;  // zeros appended to reach a multiple of subbands

  std::size_t subbands() const { return bands.empty() ? 0 : bands.dim(0); }
  std::size_t length() const { return bands.empty() ? 0 : bands.dim(1); }
};

// Kaiser window of length n (symmetric).
std::vector<double> kaiser_window(std::size_t n, double beta);

// Kaiser-windowed sinc lowpass of length taps+1:
// h[n] = sin(pi*c*(n - taps/2)) / (pi*(n - taps/2)) * w[n], h[taps/2] = c.
std::vector<double> pqmf_prototype(std::size_t taps, double cutoff, double beta);

// max over w in [0, pi/K] of | |P(w)|^2 + |P(pi/K - w)|^2 - 1 |
double power_complementarity_error(const std::vector<double>& prototype, std::size_t subbands);

// Kaiser beta in [lo, hi] minimizing power_complementarity_error.
double fit_kaiser_beta(std::size_t taps, double cutoff, std::size_t subbands, double lo = 0.0, double hi = 30.0);

// Cosine-modulated filter bank. Analysis filters
//   h_k[n] = 2 p[n] cos((2k+1) pi/(2K) (n - taps/2) + (-1)^k pi/4)
// and synthesis filters use -(-1)^k pi/4. Both directions are causal, so an
// analysis -> synthesis round trip delays the signal by `delay()` samples.
class PqmfBank {
 public:
  static PqmfBank design(const PqmfConfig& cfg);

  // Filters then decimates; the signal is zero-padded to a multiple of K.
  SubBandWaveform analysis(const Tensor& audio) const;
  // Zero-stuffs by K (gain K), filters and sums -> [K * L].
  Tensor synthesis(const SubBandWaveform& bands) const;
  Tensor synthesis(const Tensor& bands) const;

  std::size_t delay() const noexcept { return cfg_.taps; }
  const PqmfConfig& config() const noexcept { return cfg_; }
  const std::vector<double>& prototype() const noexcept { return prototype_; }
  const Tensor& analysis_filters() const noexcept { return analysis_; }    // [K, taps+1]
  const Tensor& synthesis_filters() const noexcept { return synthesis_; }  // [K, taps+1]

 private:
  PqmfConfig cfg_;
  std::vector<double> prototype_;
  std::vector<double> h_;  // analysis, double precision
  std::vector<double> g_;  // synthesis
  Tensor analysis_;
  Tensor synthesis_;
};

// 10 log10(sum x^2 / sum (x - y)^2) over the overlapping span after shifting
// y left by `delay` samples.
double reconstruction_snr_db(const Tensor& x, const Tensor& y, std::size_t delay);

}  // namespace le2e
