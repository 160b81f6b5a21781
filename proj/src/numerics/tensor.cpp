#include "le2e/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "le2e/error.hpp"

namespace le2e {

std::size_t shape_numel(const Shape& shape) {
  if (shape.empty()) return 0;
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

std::string shape_to_string(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ',';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

static void check_dims(const Shape& shape) {
  if (shape.empty()) throw ConfigError("numerics", "tensor shape must have at least one dimension");
  for (auto d : shape) {
    if (d == 0) throw ConfigError("numerics", "tensor dimension of size 0 in " + shape_to_string(shape));
  }
}

Tensor::Tensor(Shape shape, float fill) : shape_(std::move(shape)) {
  check_dims(shape_);
  data_.assign(shape_numel(shape_), fill);
}

Tensor::Tensor(Shape shape, std::vector<float> data) : shape_(std::move(shape)), data_(std::move(data)) {
  check_dims(shape_);
  if (data_.size() != shape_numel(shape_)) {
    throw ConfigError("numerics", "tensor data length " + std::to_string(data_.size()) +
                                      " does not match shape " + shape_to_string(shape_));
  }
}

Tensor Tensor::from(std::initializer_list<float> values) {
  return Tensor({values.size()}, std::vector<float>(values));
}

std::size_t Tensor::dim(std::size_t axis) const {
  if (axis >= shape_.size()) {
    throw ConfigError("numerics", "axis " + std::to_string(axis) + " out of range for shape " +
                                      shape_to_string(shape_));
  }
  return shape_[axis];
}

std::span<float> Tensor::row(std::size_t r) {
  const std::size_t width = size() / shape_[0];
  return {data_.data() + r * width, width};
}

std::span<const float> Tensor::row(std::size_t r) const {
  const std::size_t width = size() / shape_[0];
  return {data_.data() + r * width, width};
}

Tensor Tensor::reshaped(Shape shape) const {
  if (shape_numel(shape) != size()) {
    throw ConfigError("numerics", "cannot reshape " + shape_to_string(shape_) + " to " +
                                      shape_to_string(shape));
  }
  return Tensor(std::move(shape), data_);
}

bool Tensor::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](float v) { return std::isfinite(v); });
}

Tensor transpose2d(const Tensor& x) {
  if (x.rank() != 2) throw ConfigError("numerics", "transpose2d expects a 2-D tensor, got " + shape_to_string(x.shape()));
  const std::size_t rows = x.dim(0), cols = x.dim(1);
  Tensor out({cols, rows});
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out.at(c, r) = x.at(r, c);
  return out;
}

float max_abs_diff(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw InputError("numerics", "shape mismatch " + shape_to_string(a.shape()) + " vs " +
                                     shape_to_string(b.shape()));
  }
  float m = 0.0f;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

}  // namespace le2e
