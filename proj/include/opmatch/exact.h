#pragma once

// Exact maximum-weight order-preserving matching by branch and bound. Meant
// for small instances and as the reference the heuristics are measured against.

#include <cstdint>
#include <optional>

#include "opmatch/core.h"

namespace opmatch::exact {

struct SearchBudget {
  std::size_t max_points = 16;          // cap on min(|P|, |Q|)
  std::uint64_t max_nodes = 200'000'000;
  std::optional<double> time_limit;     // seconds
};

struct ExactResult {
  Matching matching;
  Rational weight;
  bool proof_of_optimality = false;  // false when the budget ran out first
  std::uint64_t nodes = 0;
};

// Branches over P points in index order: each q in ascending order, then
// "leave unmatched". Throws SizeLimitError when min(|P|,|Q|) > max_points.
ExactResult exact_max_matching(const Dataset& P, const Dataset& Q, const WeightSpec& w,
                               const SearchBudget& budget = {});

}  // namespace opmatch::exact
