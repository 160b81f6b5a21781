#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "le2e/config.hpp"
#include "le2e/tensor.hpp"
#include "le2e/weights.hpp"

namespace le2e {

// Supplies named tensors of a known shape to the model loaders. The same
// loader code either resolves weights from a bundle or records the layout.
class WeightSource {
 public:
  virtual ~WeightSource() = default;
  virtual Tensor take(const std::string& name, const Shape& shape) = 0;
};

// Pulls tensors from a bundle. Missing or mis-shaped tensors are collected
// (zero placeholders are returned) and reported together by finish().
class BundleSource final : public WeightSource {
 public:
  BundleSource(const WeightBundle& bundle, std::string module) : bundle_(bundle), module_(std::move(module)) {}

  Tensor take(const std::string& name, const Shape& shape) override;
  void finish() const;

 private:
  const WeightBundle& bundle_;
  std::string module_;
  std::vector<std::string> missing_;
  std::vector<std::string> mismatched_;
};

struct TensorSpec {
  std::string name;
  Shape shape;
};

class LayoutRecorder final : public WeightSource {
 public:
  Tensor take(const std::string& name, const Shape& shape) override;
  const std::vector<TensorSpec>& specs() const noexcept { return specs_; }

 private:
  std::vector<TensorSpec> specs_;
};

// Every generator tensor (encoder., variance., decoder., vocoder.).
std::vector<TensorSpec> generator_layout(const Config& cfg);
// Every discriminator tensor (mpd., mrd.).
std::vector<TensorSpec> discriminator_layout(const Config& cfg);

std::uint64_t layout_parameter_count(const std::vector<TensorSpec>& layout);

// Deterministic random initialization: weights ~ U(-1/sqrt(fan_in), +),
// biases and norm betas 0, norm gammas 1.
WeightBundle random_bundle(const std::vector<TensorSpec>& layout, std::uint64_t seed);

// Names that are missing from the bundle or have the wrong shape.
std::vector<std::string> layout_problems(const WeightBundle& bundle, const std::vector<TensorSpec>& layout);

}  // namespace le2e
