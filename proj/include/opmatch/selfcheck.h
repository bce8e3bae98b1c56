#pragma once

// Randomized cross-checks of every fast algorithm against the brute-force
// references in oracle.h. Backs the `oracle-check` subcommand.

#include <cstdint>
#include <string>
#include <vector>

namespace opmatch::selfcheck {

struct SuiteReport {
  std::string name;
  std::uint64_t checks = 0;
  std::uint64_t mismatches = 0;
  std::string first_mismatch;

  bool ok() const noexcept { return mismatches == 0; }
};

// size_cap bounds |P| and |Q| (the index suite uses larger key sets).
std::vector<SuiteReport> run_all(std::size_t size_cap, std::size_t trials, std::uint64_t seed);

}  // namespace opmatch::selfcheck
