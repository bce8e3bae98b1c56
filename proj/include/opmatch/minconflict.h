#pragma once

// Greedy minimum-conflict matching: repeatedly commit the surviving candidate
// edge whose conflicts with other survivors carry the least weight.

#include <cstdint>
#include <vector>

#include "opmatch/core.h"

namespace opmatch::minconflict {

// Pairwise distinct values on every axis.
bool general_position(const Dataset& ds);

// Edges with unmatched endpoints that do not conflict with M, in (p, q) order.
std::vector<Edge> surviving_candidates(const Dataset& P, const Dataset& Q, const Matching& M);

// Exact conflict mass of e: total weight of surviving candidates disjoint from
// e that conflict with it. Throws ContractViolation if e is not a survivor.
Rational conflict_score_bruteforce(Edge e, const Dataset& P, const Dataset& Q,
                                   const Matching& M, const WeightSpec& w);

// In-cell quadrant counts of one point: other active points of its own
// dataset in the same cell of the grid cut out by M's matched coordinates.
struct QuadrantCounts {
  std::int64_t nw = 0, ne = 0, sw = 0, se = 0;
};

// O(1) unweighted conflict counts for d = 2 in general position.
//
// In general position M's matched coordinates cut each dataset into a grid of
// cells, and (p, q) survives iff p and q are unmatched and sit in cells with
// the same (column, row). A survivor in another cell conflicts with e only if
// it shares e's column and disagrees on x, or shares e's row and disagrees on
// y. So
//   count = Xdis(column) + Ydis(row) - Both(cell)
// where Xdis/Ydis come from per-column/per-row 2-D prefix tables and Both is
// the sum of opposite in-cell quadrant products.
class QuadrantCounter {
 public:
  // Throws ContractViolation unless d = 2 and both datasets are in general position.
  QuadrantCounter(const Dataset& P, const Dataset& Q);

  // O(|P||Q|). Optional masks restrict which points count as partners
  // (used for weight levels); matched points never count.
  void refresh(const Matching& M, const std::vector<char>* p_mask = nullptr,
               const std::vector<char>* q_mask = nullptr);

  // e must be a survivor of the M passed to the last refresh.
  std::int64_t count(Edge e) const;

  QuadrantCounts p_counts(std::uint32_t i) const { return pq_[i]; }
  QuadrantCounts q_counts(std::uint32_t j) const { return qq_[j]; }

 private:
  struct Strip {
    std::size_t rows = 0, cols = 0;  // (U + 1) x (V + 1)
    std::vector<std::int64_t> table;
    std::int64_t at(std::size_t u, std::size_t v) const { return table[u * cols + v]; }
  };
  struct Place {
    std::uint32_t col = 0, row = 0;
    std::uint32_t x_lt = 0, x_le = 0;  // active same-column points strictly below / at most
    std::uint32_t y_lt = 0, y_le = 0;
  };

  const Dataset& P_;
  const Dataset& Q_;
  std::vector<Strip> col_strips_, row_strips_;
  std::vector<Place> pp_, qp_;
  std::vector<QuadrantCounts> pq_, qq_;
};

// conflict_count_fast: the unit-weight conflict count from a refreshed counter.
inline std::int64_t conflict_count_fast(Edge e, const QuadrantCounter& counter) {
  return counter.count(e);
}

// Horvitz-Thompson estimate of the conflict mass of e from one Poisson sample
// of survivors, each included with probability min(1, k w / W). When k is at
// least the number of survivors every survivor is taken and the result is
// exact. All-zero weights fall back to uniform inclusion.
Rational sampled_score(Edge e, const Dataset& P, const Dataset& Q, const Matching& M,
                       const WeightSpec& w, std::uint64_t k, std::uint64_t seed);

// Level-rounded conflict mass for min_freq weights: a conflicting survivor of
// weight in [L_i, L_(i+1)) counts as L_i, with L_i = w_min (1+eps)^i over the
// survivors' weights. Always within [true / (1+eps), true].
Rational scaled_score(Edge e, const Dataset& P, const Dataset& Q, const Matching& M,
                      const Rational& eps);

enum class ScoreKind { exact_count, sampled, scaled };

struct Mode {
  ScoreKind kind = ScoreKind::exact_count;
  std::uint64_t k = 0;     // sampled
  std::uint64_t seed = 0;  // sampled
  Rational eps;            // scaled

  static Mode exact() { return {}; }
  static Mode sampled(std::uint64_t k, std::uint64_t seed) { return {ScoreKind::sampled, k, seed, {}}; }
  static Mode scaled(Rational eps) { return {ScoreKind::scaled, 0, 0, std::move(eps)}; }
};

// Ties: smallest score, then largest weight, then smallest (p, q).
Matching greedy_min_conflict(const Dataset& P, const Dataset& Q, const WeightSpec& w,
                             const Mode& mode, unsigned threads = 1);

}  // namespace opmatch::minconflict
