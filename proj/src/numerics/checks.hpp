#pragma once

#include <string>

#include "le2e/error.hpp"
#include "le2e/tensor.hpp"

namespace le2e::detail {

inline void require(bool ok, const char* module, const std::string& message) {
  if (!ok) throw ConfigError(module, message);
}

inline void require_rank(const Tensor& t, std::size_t rank, const char* module, const char* what) {
  if (t.rank() != rank) {
    throw ConfigError(module, std::string(what) + " must be rank " + std::to_string(rank) + ", got " +
                                  shape_to_string(t.shape()));
  }
}

// Mirror index into [0, n) without repeating the edge sample; bounces as
// many times as needed so any offset is valid.
inline std::ptrdiff_t reflect_index(std::ptrdiff_t i, std::ptrdiff_t n) {
  if (n == 1) return 0;
  const std::ptrdiff_t period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

}  // namespace le2e::detail
