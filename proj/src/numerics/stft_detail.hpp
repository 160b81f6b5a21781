#pragma once

#include "le2e/numerics.hpp"

namespace le2e::detail {

void fill_frame(const Tensor& audio, const StftConfig& cfg, std::size_t frame_index, double* frame);
void check_stft_input(const Tensor& audio, const StftConfig& cfg);

}  // namespace le2e::detail
