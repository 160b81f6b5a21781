#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "le2e/synthesizer.hpp"

namespace le2e::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kUsage = 2, kIo = 3 };

// Whitespace-separated non-negative integers.
std::vector<std::size_t> parse_ids(const std::string& text, const std::string& what);
// Whitespace-separated floats.
std::vector<float> parse_floats(const std::string& text, const std::string& what);

struct BenchReport {
  double synthesized_seconds = 0.0;
  std::vector<double> wall_seconds;  // one per timed run, warm-up excluded
  double wall_mean = 0.0;
  double wall_stddev = 0.0;
  double rtf = 0.0;  // wall_mean / synthesized_seconds
  int threads = 1;
};

// Phonemes plus a duration override yielding at least `seconds` of audio.
std::pair<PhonemeSequence, DurationSequence> bench_utterance(const Config& cfg, double seconds);

BenchReport run_bench(const Synthesizer& synth, double seconds, int runs);

// Full command line entry point; returns the process exit code.
int run(int argc, char** argv);

}  // namespace le2e::cli
