#pragma once

// Slow reference implementations. They share only the data types with the
// real algorithms and are used to cross-check them in tests and oracle-check.

#include <cstdint>
#include <vector>

#include "opmatch/core.h"
#include "opmatch/oned.h"

namespace opmatch::oracle {

// Injective, and on every axis the induced value map P -> Q is a strictly
// increasing function.
bool realizable(const Matching& m, const Dataset& P, const Dataset& Q);

// Maximum weight over every injective partial map P -> Q that is realizable.
Rational max_matching_weight(const Dataset& P, const Dataset& Q, const WeightSpec& w);

// Maximum weight over every non-crossing pairing of the two tables.
Rational max_noncrossing_weight(const oned::CdfTable& A, const oned::CdfTable& B,
                                const Rational& kappa);

// Heaviest chain whose P and Q endpoints both strictly increase on every axis
// after negating the axes flagged in `negate`, using only unmatched points and
// edges realizable together with M.
Rational max_chain_weight(const Dataset& P, const Dataset& Q, const Matching& M,
                          const std::vector<char>& negate, const WeightSpec& w);

// Sum of weights of candidates (unmatched endpoints, realizable with M,
// disjoint from e) that are not realizable together with e.
Rational conflict_mass(Edge e, const Dataset& P, const Dataset& Q, const Matching& M,
                       const WeightSpec& w);

// Same, counting only candidates whose weight is at least `threshold`.
std::int64_t conflict_count_at_least(Edge e, const Dataset& P, const Dataset& Q,
                                     const Matching& M, const WeightSpec& w,
                                     const Rational& threshold);

// Some length-|pattern| subsequence of text is order-isomorphic to pattern.
bool contains_pattern(const std::vector<int>& text, const std::vector<int>& pattern);

}  // namespace opmatch::oracle
