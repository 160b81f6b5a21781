#include "le2e/synthesizer.hpp"

namespace le2e {

namespace {

const Config& validated(const Config& cfg) {
  cfg.validate();
  return cfg;
}

}  // namespace

Synthesizer::Synthesizer(const WeightBundle& bundle, const Config& cfg)
    : cfg_(validated(cfg)), acoustic_(bundle, cfg.acoustic), vocoder_(bundle, cfg) {}

Synthesis Synthesizer::run(const PhonemeSequence& seq, const std::optional<DurationSequence>& durations) const {
  Synthesis out;
  out.acoustic = acoustic_.forward(seq, durations);
  out.waveform = vocoder_.forward(out.acoustic.latent);
  return out;
}

}  // namespace le2e
