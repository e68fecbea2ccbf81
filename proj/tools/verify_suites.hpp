#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "venq/json_io.hpp"

namespace venq::verify {

struct CheckResult {
  std::string check;
  Json inputs;
  bool pass;
  std::string metric;
};

struct SuiteConfig {
  std::uint64_t seed = 42;
  int count = 16;  // size of randomized check families
  int precision = 5;
  std::vector<std::uint64_t> primes{2, 3, 5};
  double tolerance = 1e-20;
  std::uint64_t costCeiling = 100'000'000ULL;
};

using Emit = std::function<void(const CheckResult&)>;

std::vector<std::string> suiteNames();

// Runs one named suite ("all" chains every suite); returns false for an
// unknown name. Checks are emitted in a fixed order.
bool runSuite(const std::string& name, const SuiteConfig& cfg, const Emit& emit);

}  // namespace venq::verify
