#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace parrondo::verify {

struct PropertyResult {
  std::string name;
  bool pass = false;
  std::string detail;  // metrics, or the counterexample on failure
};

using Suite = std::vector<PropertyResult>;

// Named suites runnable from the command line; each maps onto the bound or
// example it checks. Unknown names throw std::invalid_argument.
Suite run_suite(const std::string& name, std::uint64_t seed, long samples);
std::vector<std::string> suite_names();

// Individual suites (samples <= 0 selects each suite's default volume).
Suite thm724(std::uint64_t seed, long samples);
Suite thm723(std::uint64_t seed, long samples);
Suite thm733(std::uint64_t seed, long samples);
Suite thm734(std::uint64_t seed, long samples);
Suite thm832(std::uint64_t seed, long samples);
Suite thm841(std::uint64_t seed, long samples);
Suite thm931(std::uint64_t seed, long samples);
Suite thm932(std::uint64_t seed, long samples);
Suite ex933(std::uint64_t seed, long samples);
Suite ex934(std::uint64_t seed, long samples);
Suite dilation(std::uint64_t seed, long samples);
Suite oracle(std::uint64_t seed, long samples);

}  // namespace parrondo::verify
