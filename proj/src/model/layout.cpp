#include "le2e/layout.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "le2e/acoustic.hpp"
#include "le2e/discriminators.hpp"
#include "le2e/error.hpp"
#include "le2e/vocoder.hpp"

namespace le2e {

Tensor BundleSource::take(const std::string& name, const Shape& shape) {
  const Tensor* t = bundle_.find(name);
  if (t == nullptr) {
    missing_.push_back(name);
    return Tensor(shape);
  }
  if (t->shape() != shape) {
    mismatched_.push_back(name + " (expected " + shape_to_string(shape) + ", got " + shape_to_string(t->shape()) +
                          ")");
    return Tensor(shape);
  }
  return *t;
}

void BundleSource::finish() const {
  if (missing_.empty() && mismatched_.empty()) return;
  std::string msg;
  if (!missing_.empty()) {
    msg += "missing weight tensor" + std::string(missing_.size() > 1 ? "s" : "") + ":";
    constexpr std::size_t kShown = 12;
    for (std::size_t i = 0; i < std::min(kShown, missing_.size()); ++i) msg += " '" + missing_[i] + "'";
    if (missing_.size() > kShown) msg += " (and " + std::to_string(missing_.size() - kShown) + " more)";
  }
  if (!mismatched_.empty()) {
    if (!msg.empty()) msg += "; ";
    msg += "shape mismatch:";
    for (const auto& n : mismatched_) msg += " '" + n.substr(0, n.find(' ')) + "'" + n.substr(n.find(' '));
  }
  throw ConfigError(module_, msg);
}

Tensor LayoutRecorder::take(const std::string& name, const Shape& shape) {
  specs_.push_back({name, shape});
  return Tensor(shape);
}

std::vector<TensorSpec> generator_layout(const Config& cfg) {
  cfg.validate();
  LayoutRecorder rec;
  AcousticWeights::load(rec, cfg.acoustic);
  VocoderWeights::load(rec, cfg.vocoder);
  return rec.specs();
}

std::vector<TensorSpec> discriminator_layout(const Config& cfg) {
  cfg.validate();
  LayoutRecorder rec;
  MpdWeights::load(rec, cfg.mpd);
  MrdWeights::load(rec, cfg.mrd);
  return rec.specs();
}

std::uint64_t layout_parameter_count(const std::vector<TensorSpec>& layout) {
  std::uint64_t n = 0;
  for (const auto& s : layout) n += shape_numel(s.shape);
  return n;
}

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

WeightBundle random_bundle(const std::vector<TensorSpec>& layout, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  WeightBundle bundle;
  for (const auto& spec : layout) {
    Tensor t(spec.shape);
    if (ends_with(spec.name, ".gamma")) {
      std::fill(t.storage().begin(), t.storage().end(), 1.0f);
    } else if (ends_with(spec.name, ".beta") || ends_with(spec.name, ".bias")) {
      // zeros
    } else {
      const double fan_in = static_cast<double>(t.size()) / static_cast<double>(spec.shape[0]);
      const double bound = 1.0 / std::sqrt(fan_in);
      std::uniform_real_distribution<double> dist(-bound, bound);
      for (auto& v : t.storage()) v = static_cast<float>(dist(rng));
    }
    bundle.add(spec.name, std::move(t));
  }
  return bundle;
}

std::vector<std::string> layout_problems(const WeightBundle& bundle, const std::vector<TensorSpec>& layout) {
  std::vector<std::string> out;
  for (const auto& spec : layout) {
    const Tensor* t = bundle.find(spec.name);
    if (t == nullptr) {
      out.push_back(spec.name + ": missing");
    } else if (t->shape() != spec.shape) {
      out.push_back(spec.name + ": expected " + shape_to_string(spec.shape) + ", got " + shape_to_string(t->shape()));
    }
  }
  return out;
}

}  // namespace le2e
