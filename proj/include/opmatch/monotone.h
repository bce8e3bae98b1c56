#pragma once

// Greedy matching by repeatedly committing the heaviest monotone chain that is
// consistent with the current partial matching.

#include <optional>
#include <vector>

#include "opmatch/core.h"
#include "opmatch/rangeindex.h"

namespace opmatch::monotone {

enum class Direction { increasing, decreasing };
enum class Mode { inc, dec, mix };

const char* to_string(Mode mode);

// Axes to negate before running the increasing algorithm. Axis 0 is never
// negated. decreasing = every axis except the first.
std::vector<char> direction_mask(Direction dir, std::size_t dim);

// All 2^(d-1) masks, the increasing one first.
std::vector<std::vector<char>> all_masks(std::size_t dim);

struct ChainCell {
  Edge edge;
  WeightValue value = 0;  // scaled by the weight table's denominator
  std::optional<Edge> predecessor;
};

struct Chain {
  std::vector<Edge> edges;  // in increasing order
  WeightValue weight = 0;   // scaled
  std::size_t candidates = 0;
};

// Heaviest chain of unmatched, M-compatible edges whose P and Q endpoints both
// strictly increase on every axis after applying `negate`. When `cells` is
// given it receives one cell per candidate in scan order.
Chain heaviest_monotone_chain(const Dataset& P, const Dataset& Q, const Matching& M,
                              const std::vector<char>& negate, const WeightTable& weights,
                              rangeindex::IndexKind index,
                              std::vector<ChainCell>* cells = nullptr);

Chain heaviest_monotone_chain(const Dataset& P, const Dataset& Q, const Matching& M,
                              Direction dir, const WeightTable& weights,
                              rangeindex::IndexKind index);

struct GreedyResult {
  Matching matching;
  std::vector<std::size_t> chain_lengths;  // one per committed chain
};

GreedyResult greedy_monotone(const Dataset& P, const Dataset& Q, const WeightSpec& w,
                             Mode mode, rangeindex::IndexKind index);

}  // namespace opmatch::monotone
