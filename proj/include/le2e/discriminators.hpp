#pragma once

#include <string>
#include <vector>

#include "le2e/config.hpp"
#include "le2e/layout.hpp"
#include "le2e/numerics.hpp"
#include "le2e/tensor.hpp"

namespace le2e {

struct DiscriminatorOutput {
  Tensor score;                  // post-conv output [1, H, W]
  std::vector<Tensor> features;  // one per conv layer, score included last
};

struct Conv2dLayer {
  Tensor weight;  // [C_out, C_in, KH, KW]
  Tensor bias;
  Conv2dGeometry geometry;
};

struct SubDiscriminatorWeights {
  std::vector<Conv2dLayer> layers;
  Conv2dLayer post;
};

struct MpdWeights {
  std::vector<SubDiscriminatorWeights> subs;  // one per period

  static MpdWeights load(WeightSource& src, const MpdConfig& cfg);
  static MpdWeights from_bundle(const WeightBundle& bundle, const MpdConfig& cfg);
};

struct MrdWeights {
  std::vector<SubDiscriminatorWeights> subs;  // one per resolution

  static MrdWeights load(WeightSource& src, const MrdConfig& cfg);
  static MrdWeights from_bundle(const WeightBundle& bundle, const MrdConfig& cfg);
};

// audio [T] -> [ceil(T/period), period], reflect-padding the tail.
Tensor mpd_reshape(const Tensor& audio, std::size_t period);

std::vector<DiscriminatorOutput> mpd_forward(const Tensor& audio, const MpdWeights& w, const MpdConfig& cfg);
std::vector<DiscriminatorOutput> mrd_forward(const Tensor& audio, const MrdWeights& w, const MrdConfig& cfg);

// Convenience holder for both discriminator sets.
struct Discriminators {
  MpdWeights mpd;
  MrdWeights mrd;
  MpdConfig mpd_cfg;
  MrdConfig mrd_cfg;

  static Discriminators from_bundle(const WeightBundle& bundle, const Config& cfg);
  // MPD outputs followed by MRD outputs.
  std::vector<DiscriminatorOutput> forward(const Tensor& audio) const;
};

}  // namespace le2e
