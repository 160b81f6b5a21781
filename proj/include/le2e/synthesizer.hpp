#pragma once

#include <optional>

#include "le2e/acoustic.hpp"
#include "le2e/config.hpp"
#include "le2e/vocoder.hpp"
#include "le2e/weights.hpp"

namespace le2e {

struct Synthesis {
  AcousticOutput acoustic;
  Tensor waveform;  // [frames * frame_hop]
};

// Phoneme ids -> waveform. Holds its own copy of the weights.
class Synthesizer {
 public:
  Synthesizer(const WeightBundle& bundle, const Config& cfg);

  Synthesis run(const PhonemeSequence& seq, const std::optional<DurationSequence>& durations = std::nullopt) const;

  const Config& config() const noexcept { return cfg_; }
  const AcousticModel& acoustic() const noexcept { return acoustic_; }
  const Vocoder& vocoder() const noexcept { return vocoder_; }

 private:
  Config cfg_;
  AcousticModel acoustic_;
  Vocoder vocoder_;
};

}  // namespace le2e
