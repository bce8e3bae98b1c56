#pragma once

// One-dimensional max-weight non-crossing matching over CDFs, and the
// per-axis extension that assembles tuples from independent 1-D matches.

#include <cstddef>
#include <utility>
#include <vector>

#include "opmatch/core.h"

namespace opmatch::oned {

// cum[i] = scaled_cum[i] / total, exactly.
struct CdfTable {
  std::vector<Coord> values;
  std::vector<Rational> cum;
  std::vector<BigInt> scaled_cum;
  BigInt total;

  std::size_t size() const noexcept { return values.size(); }
};

// Duplicate values are merged. Throws ValidationError on empty input, on a
// negative frequency, or when every frequency is zero.
CdfTable build_cdf(std::vector<std::pair<Coord, Rational>> values_with_freq);

// Marginal CDF of one axis (frequencies summed over points sharing the value).
CdfTable marginal_cdf(const Dataset& ds, std::size_t axis);

struct NoncrossingMatch {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // strictly increasing in both
  Rational weight;
};

// O(|A||B|) DP with w(i,j) = kappa - |F_A(i) - F_B(j)|. Negative-weight pairs
// are never chosen. Ties prefer the diagonal, then the (i-1, j) branch.
NoncrossingMatch max_weight_noncrossing(const CdfTable& A, const CdfTable& B,
                                        const Rational& kappa = Rational(1));

struct AxisMatch {
  // For each value of Q's marginal on this axis, the matched P value.
  std::vector<Coord> q_values;
  std::vector<std::optional<Coord>> p_value;
};

struct Extended1d {
  Assignment assignment;       // indexed by Q point
  std::vector<AxisMatch> axes;  // one per axis
};

Extended1d extended_1d_attack(const Dataset& P, const Dataset& Q,
                              const Rational& kappa = Rational(1));

}  // namespace opmatch::oned
