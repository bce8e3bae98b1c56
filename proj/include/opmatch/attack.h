#pragma once

// One entry point over every matcher, shared by the CLI and the test harnesses.

#include <optional>
#include <string_view>

#include "opmatch/core.h"
#include "opmatch/exact.h"
#include "opmatch/rangeindex.h"

namespace opmatch::attack {

enum class Algorithm {
  oned,
  minconflict,
  minconflict_sampled,
  minconflict_scaled,
  monotone_inc,
  monotone_dec,
  monotone_mix,
  exact
};

const char* to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view name);  // throws ConfigError

struct Config {
  Algorithm algorithm = Algorithm::monotone_mix;
  WeightSpec weight;
  rangeindex::IndexKind index = rangeindex::IndexKind::range_tree;
  std::uint64_t k = 0;                 // minconflict-sampled; must be >= 1
  Rational eps = make_rational(1, 2);  // minconflict-scaled
  std::uint64_t seed = 0;
  unsigned threads = 1;
  exact::SearchBudget budget;
  Rational oned_kappa = 1;
};

// Throws ConfigError for invalid combinations (scaled needs min weights,
// sampled needs k >= 1, eps must be positive).
void validate(const Config& c);

struct Outcome {
  std::optional<Matching> matching;  // absent for oned, which assigns per axis
  Assignment assignment;
  // Matching weight. For oned: the weight of pairing each Q point with the P
  // point at its assigned tuple, where that tuple exists in P.
  Rational objective;
  std::optional<bool> proof_of_optimality;  // exact only
  std::uint64_t nodes = 0;                   // exact only
  double runtime_seconds = 0;
};

Outcome run(const Dataset& P, const Dataset& Q, const Config& config);

}  // namespace opmatch::attack
