#pragma once

// Small random instances for oracle cross-checks and benchmarks.

#include <vector>

#include "opmatch/core.h"
#include "opmatch/rng.h"

namespace opmatch::randinst {

// Up to n points drawn on a grid x grid (x ...) lattice, so ties are common.
Dataset tied(Rng& rng, std::size_t n, std::size_t dim, Coord grid, std::int64_t max_count = 5);

// Exactly n points with pairwise distinct values on every axis.
Dataset general(Rng& rng, std::size_t n, std::size_t dim, std::int64_t max_count = 5);

// Random order-preserving partial matching: shuffled candidate edges added
// while they stay valid, stopping after roughly `fraction` of min(|P|,|Q|).
Matching partial_matching(Rng& rng, const Dataset& P, const Dataset& Q, double fraction);

// Uniform random permutation of 1..n.
std::vector<int> permutation(Rng& rng, std::size_t n);

}  // namespace opmatch::randinst
