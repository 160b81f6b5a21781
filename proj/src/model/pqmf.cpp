#include "le2e/pqmf.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "le2e/error.hpp"

namespace le2e {

namespace {

constexpr const char* kModule = "vocoder";
constexpr double kPi = std::numbers::pi;

}  // namespace

std::vector<double> kaiser_window(std::size_t n, double beta) {
  std::vector<double> w(n, 1.0);
  if (n < 2) return w;
  const double denom = std::cyl_bessel_i(0.0, beta);
  const double m = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = 2.0 * static_cast<double>(i) / m - 1.0;
    w[i] = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / denom;
  }
  return w;
}

std::vector<double> pqmf_prototype(std::size_t taps, double cutoff, double beta) {
  if (taps % 2 != 0) throw ConfigError(kModule, "PQMF taps must be even");
  if (!(cutoff > 0.0 && cutoff < 1.0)) throw ConfigError(kModule, "PQMF cutoff must be in (0, 1)");
  const std::size_t n = taps + 1;
  const auto w = kaiser_window(n, beta);
  std::vector<double> h(n);
  const double mid = static_cast<double>(taps) / 2.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) - mid;
    const double ideal = (i == taps / 2) ? cutoff : std::sin(kPi * cutoff * t) / (kPi * t);
    h[i] = ideal * w[i];
  }
  return h;
}

double power_complementarity_error(const std::vector<double>& prototype, std::size_t subbands) {
  constexpr std::size_t kGrid = 1024;
  auto response = [&](double omega) {
    std::complex<double> acc = 0.0;
    for (std::size_t n = 0; n < prototype.size(); ++n) {
      acc += prototype[n] * std::polar(1.0, -omega * static_cast<double>(n));
    }
    return std::norm(acc);
  };
  const double band = kPi / static_cast<double>(subbands);
  double worst = 0.0;
  for (std::size_t i = 0; i <= kGrid; ++i) {
    const double omega = band * static_cast<double>(i) / kGrid;
    worst = std::max(worst, std::abs(response(omega) + response(band - omega) - 1.0));
  }
  return worst;
}

double fit_kaiser_beta(std::size_t taps, double cutoff, std::size_t subbands, double lo, double hi) {
  auto objective = [&](double beta) {
    return power_complementarity_error(pqmf_prototype(taps, cutoff, beta), subbands);
  };
  // Coarse scan, then golden-section refinement around the best grid point.
  constexpr int kSteps = 60;
  const double step = (hi - lo) / kSteps;
  double best = lo;
  double best_val = objective(lo);
  for (int i = 1; i <= kSteps; ++i) {
    const double b = lo + step * i;
    const double v = objective(b);
    if (v < best_val) {
      best_val = v;
      best = b;
    }
  }
  double a = std::max(lo, best - step);
  double b = std::min(hi, best + step);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = objective(c);
  double fd = objective(d);
  for (int it = 0; it < 40; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = objective(d);
    }
  }
  return (a + b) / 2.0;
}

PqmfBank PqmfBank::design(const PqmfConfig& cfg) {
  cfg.validate();
  PqmfBank bank;
  bank.cfg_ = cfg;
  bank.prototype_ = pqmf_prototype(cfg.taps, cfg.cutoff, cfg.beta);
  const std::size_t k_bands = cfg.subbands;
  const std::size_t n = cfg.taps + 1;
  const double mid = static_cast<double>(cfg.taps) / 2.0;
  bank.h_.resize(k_bands * n);
  bank.g_.resize(k_bands * n);
  bank.analysis_ = Tensor({k_bands, n});
  bank.synthesis_ = Tensor({k_bands, n});
  for (std::size_t k = 0; k < k_bands; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const double freq = (2.0 * static_cast<double>(k) + 1.0) * kPi / (2.0 * static_cast<double>(k_bands));
    for (std::size_t i = 0; i < n; ++i) {
      const double arg = freq * (static_cast<double>(i) - mid);
      const double p = 2.0 * bank.prototype_[i];
      bank.h_[k * n + i] = p * std::cos(arg + sign * kPi / 4.0);
      bank.g_[k * n + i] = p * std::cos(arg - sign * kPi / 4.0);
      bank.analysis_.at(k, i) = static_cast<float>(bank.h_[k * n + i]);
      bank.synthesis_.at(k, i) = static_cast<float>(bank.g_[k * n + i]);
    }
  }
  return bank;
}

SubBandWaveform PqmfBank::analysis(const Tensor& audio) const {
  if (audio.rank() != 1) throw InputError(kModule, "PQMF analysis expects a 1-D signal");
  const std::size_t k_bands = cfg_.subbands;
  const std::size_t n = cfg_.taps + 1;
  const std::size_t t = audio.size();
  const std::size_t len = (t + k_bands - 1) / k_bands;
  SubBandWaveform out;
  out.padding = len * k_bands - t;
  out.bands = Tensor({k_bands, len});
  const float* x = audio.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t m = 0; m < static_cast<std::ptrdiff_t>(len); ++m) {
    const std::size_t centre = static_cast<std::size_t>(m) * k_bands;
    for (std::size_t k = 0; k < k_bands; ++k) {
      const double* h = h_.data() + k * n;
      double acc = 0.0;
      for (std::size_t i = 0; i < n && i <= centre; ++i) {
        const std::size_t src = centre - i;
        if (src < t) acc += h[i] * x[src];
      }
      out.bands.at(k, static_cast<std::size_t>(m)) = static_cast<float>(acc);
    }
  }
  return out;
}

Tensor PqmfBank::synthesis(const SubBandWaveform& bands) const { return synthesis(bands.bands); }

Tensor PqmfBank::synthesis(const Tensor& bands) const {
  const std::size_t k_bands = cfg_.subbands;
  if (bands.rank() != 2 || bands.dim(0) != k_bands) {
    throw InputError(kModule, "PQMF synthesis expects [" + std::to_string(k_bands) + ", L] bands, got " +
                                  shape_to_string(bands.shape()));
  }
  const std::size_t n = cfg_.taps + 1;
  const std::size_t len = bands.dim(1);
  const std::size_t t = len * k_bands;
  Tensor out({t});
  const double gain = static_cast<double>(k_bands);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(t); ++s) {
    const std::size_t pos = static_cast<std::size_t>(s);
    double acc = 0.0;
    // taps j with (pos - j) a multiple of K: j = pos % K, pos % K + K, ...
    for (std::size_t j = pos % k_bands; j < n && j <= pos; j += k_bands) {
      const std::size_t m = (pos - j) / k_bands;
      for (std::size_t k = 0; k < k_bands; ++k) acc += g_[k * n + j] * bands.at(k, m);
    }
    out[pos] = static_cast<float>(gain * acc);
  }
  return out;
}

double reconstruction_snr_db(const Tensor& x, const Tensor& y, std::size_t delay) {
  if (y.size() <= delay) throw InputError(kModule, "signal shorter than the reconstruction delay");
  const std::size_t n = std::min(x.size(), y.size() - delay);
  double signal = 0.0;
  double noise = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = static_cast<double>(x[i]) - static_cast<double>(y[i + delay]);
    signal += static_cast<double>(x[i]) * x[i];
    noise += e * e;
  }
  if (noise == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(signal / noise);
}

}  // namespace le2e
