#pragma once

// Synthetic instances: a uniform superset R sampled into P and Q, and
// permutation point sets for pattern-embedding instances.

#include <cstdint>
#include <vector>

#include "opmatch/core.h"

namespace opmatch::datagen {

struct GenParams {
  std::size_t superset_size = 60;
  std::size_t dim = 2;
  std::vector<Coord> extent{1000, 1000};  // coordinates in [0, extent) per axis
  std::int64_t f_min = 1;
  std::int64_t f_max = 100;
  Rational beta = make_rational(3, 5);
  Rational p_bion = make_rational(7, 10);
  std::uint64_t seed = 1;
};

// Throws ConfigError on out-of-range parameters.
void validate(const GenParams& params);

// Distinct uniform grid points with counts uniform in [f_min, f_max].
// Throws CapacityError when the grid has fewer than superset_size cells.
Dataset generate_superset(const GenParams& params);

struct Sample {
  Dataset P;
  Dataset Q;
  Truth truth;  // per Q point
};

// P = R; each point of R enters Q with probability beta and count
// Binomial(count, p_bion); zero counts are dropped. Draw order per point of R:
// one Bernoulli(beta), then (if kept) `count` Bernoulli(p_bion) draws.
// Throws EmptySampleError when Q comes out empty.
Sample sample_case1(const Dataset& R, const Rational& beta, const Rational& p_bion,
                    std::uint64_t seed);

// P and Q drawn independently from R by the same procedure (streams
// "sample.P" and "sample.Q"). Throws EmptySampleError when either is empty.
Sample sample_case2(const Dataset& R, const Rational& beta, const Rational& p_bion,
                    std::uint64_t seed);

// Points (i, perm[i-1]) with unit counts; perm must be a permutation of 1..n.
Dataset permutation_to_points(const std::vector<int>& perm);

// {sigma(1..k)} = {1..k} for some k < n.
bool sum_decomposable(const std::vector<int>& perm);

struct BlockInstance {
  Dataset P;
  Dataset Q;
  Truth truth;
  std::vector<int> chosen;  // the block's permutation
  std::size_t chosen_index = 0;
  bool anti_diagonal = false;
};

// P holds all n! permutations of size n as n x n blocks, one point per grid
// row and column, all with the same count, so every row and column marginal
// is identical. Q is block `chosen_index` (in lexicographic permutation order).
// Blocks run along the diagonal, or along the anti-diagonal when the chosen
// permutation is sum-decomposable; either way any full-size order-preserving
// embedding of Q has to stay inside a single block.
BlockInstance permutation_blocks(std::size_t n, std::size_t chosen_index, std::int64_t count = 1);

}  // namespace opmatch::datagen
