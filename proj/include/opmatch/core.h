#pragma once

// Shared vocabulary: points, datasets, edges, matchings, weights, and the
// dominance / conflict predicates every matcher is built on.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "opmatch/rational.h"

namespace opmatch {

using Coord = std::int64_t;
using Coords = std::vector<Coord>;

struct Point {
  Coords coords;
  std::int64_t raw_count = 0;
  Rational freq;  // raw_count / dataset total
};

// Points sorted strictly lexicographically by coordinates, duplicates merged.
// Coordinates are integers on a decimal grid: value = coord * 10^-scale.
class Dataset {
 public:
  struct Row {
    Coords coords;
    std::int64_t count = 0;
  };

  Dataset() = default;
  explicit Dataset(std::size_t dim, int scale = 0) : dim_(dim), scale_(scale) {}

  // Sorts, merges duplicate coordinates (or throws ValidationError when
  // merge_duplicates is false), and normalizes frequencies.
  static Dataset from_rows(std::size_t dim, std::vector<Row> rows,
                           bool merge_duplicates = true, int scale = 0);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  int scale() const noexcept { return scale_; }
  std::int64_t total_records() const noexcept { return total_; }

  const Point& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Point>& points() const noexcept { return points_; }
  auto begin() const noexcept { return points_.begin(); }
  auto end() const noexcept { return points_.end(); }

  Coord coord(std::size_t i, std::size_t axis) const noexcept {
    return flat_[i * dim_ + axis];
  }
  std::span<const Coord> coords_of(std::size_t i) const noexcept {
    return {flat_.data() + i * dim_, dim_};
  }
  std::int64_t count(std::size_t i) const noexcept { return points_[i].raw_count; }

  std::optional<std::size_t> find(std::span<const Coord> coords) const;

  std::vector<Row> rows() const;

  friend bool operator==(const Dataset& a, const Dataset& b);

 private:
  std::size_t dim_ = 0;
  int scale_ = 0;
  std::int64_t total_ = 0;
  std::vector<Point> points_;
  std::vector<Coord> flat_;
};

struct Edge {
  std::uint32_t p = 0;
  std::uint32_t q = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Matching {
  std::vector<Edge> edges;

  std::size_t size() const noexcept { return edges.size(); }
  bool empty() const noexcept { return edges.empty(); }
  void sort() { std::sort(edges.begin(), edges.end()); }
};

// Per-Q-point recovered plaintext coordinates; nullopt = unassigned.
using Assignment = std::vector<std::optional<Coords>>;

// Per-Q-point true plaintext coordinates; nullopt = unknown.
using Truth = std::vector<std::optional<Coords>>;

Assignment assignment_from(const Matching& m, const Dataset& P, const Dataset& Q);

// Which P and Q indices a matching already uses.
struct MatchedFlags {
  std::vector<char> p;
  std::vector<char> q;

  MatchedFlags(std::size_t np, std::size_t nq) : p(np, 0), q(nq, 0) {}
  MatchedFlags(const Matching& m, std::size_t np, std::size_t nq);
  void add(Edge e) { p[e.p] = 1; q[e.q] = 1; }
  bool free(Edge e) const { return !p[e.p] && !q[e.q]; }
};

enum class WeightKind { unit, min_freq, kappa_diff };

struct WeightSpec {
  WeightKind kind = WeightKind::unit;
  std::optional<Rational> kappa;  // kappa_diff only; defaults to the max frequency
};

const char* to_string(WeightKind kind);
WeightKind parse_weight_kind(std::string_view name);

// a ≺ b (b dominates a). 2-D: a.x < b.x, or a.x == b.x and b.y < a.y.
// d >= 3: a.c1 < b.c1, or a.c1 == b.c1 and b.ck < a.ck on every other axis.
bool dominates(const Point& a, const Point& b);

// True iff the per-axis orders of the two P endpoints and the two Q
// endpoints disagree on some axis (a tie on one side only counts as
// disagreement). Throws ContractViolation when the edges share an endpoint.
bool edges_conflict(Edge e1, Edge e2, const Dataset& P, const Dataset& Q);

// Hot-loop form without endpoint checks.
inline bool conflict_unchecked(const Dataset& P, const Dataset& Q, Edge a, Edge b) {
  const std::size_t d = P.dim();
  for (std::size_t k = 0; k < d; ++k) {
    const Coord dp = P.coord(a.p, k) - P.coord(b.p, k);
    const Coord dq = Q.coord(a.q, k) - Q.coord(b.q, k);
    if ((dp > 0) != (dq > 0) || (dp < 0) != (dq < 0)) return true;
  }
  return false;
}

// True when e conflicts with some edge of m. Edges sharing an endpoint with e
// are skipped; callers check degree separately.
bool conflicts_with_any(Edge e, const Matching& m, const Dataset& P, const Dataset& Q);

// Injective on both sides and pairwise non-conflicting. Throws
// StructuralError on out-of-range indices or mismatched dimensions.
bool is_order_preserving(const Matching& m, const Dataset& P, const Dataset& Q);

// max frequency over both datasets
Rational default_kappa(const Dataset& P, const Dataset& Q);

// Fills in the default kappa for kappa_diff.
WeightSpec resolve(WeightSpec spec, const Dataset& P, const Dataset& Q);

// Throws ConfigError for kappa_diff with an unresolved kappa or a negative result.
Rational edge_weight(const Point& p, const Point& q, const WeightSpec& w);

Rational matching_weight(const Matching& m, const Dataset& P, const Dataset& Q,
                         const WeightSpec& w);

// Dense |P| x |Q| table of exact edge weights over one common denominator.
class WeightTable {
 public:
  WeightTable(const Dataset& P, const Dataset& Q, WeightSpec spec);

  const WeightSpec& spec() const noexcept { return spec_; }
  std::size_t p_size() const noexcept { return np_; }
  std::size_t q_size() const noexcept { return nq_; }

  WeightValue operator()(std::size_t p, std::size_t q) const noexcept {
    return values_[p * nq_ + q];
  }
  WeightValue at(Edge e) const noexcept { return (*this)(e.p, e.q); }
  WeightValue denominator() const noexcept { return denominator_; }

  Rational to_rational(WeightValue scaled) const;
  WeightValue sum(const Matching& m) const;

 private:
  WeightSpec spec_;
  std::size_t np_ = 0;
  std::size_t nq_ = 0;
  WeightValue denominator_ = 1;
  std::vector<WeightValue> values_;
};

}  // namespace opmatch
