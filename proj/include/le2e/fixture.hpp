#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "le2e/weights.hpp"

namespace le2e {

// One golden fixture directory: inputs.le2e, expected.le2e and meta.json
// ({"op", "oracle", "seed", "tolerance", "params"}).
struct Fixture {
  std::string name;
  std::string op;
  std::string oracle;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  std::string params_json = "{}";
  WeightBundle inputs;
  WeightBundle expected;
};

Fixture load_fixture(const std::string& dir);
void save_fixture(const std::string& dir, const Fixture& fixture);
// Every immediate subdirectory holding a meta.json, sorted by name.
std::vector<Fixture> load_fixture_set(const std::string& root);

struct FixtureResult {
  std::string name;
  std::string op;
  double tolerance = 0.0;
  std::vector<std::pair<std::string, double>> max_abs_diff;  // per expected tensor
  bool passed = false;
  std::string error;
};

// Evaluates the engine on the fixture inputs and compares every expected tensor.
FixtureResult run_fixture(const Fixture& fixture);

}  // namespace le2e
