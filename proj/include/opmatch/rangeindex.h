#pragma once

// Static max-aggregate indexes over K-dimensional integer keys for
// dominance (lower-open orthant) queries with monotone point updates.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "opmatch/core.h"

namespace opmatch::rangeindex {

enum class IndexKind { range_tree, kd_tree, naive };

const char* to_string(IndexKind kind);
IndexKind parse_index_kind(std::string_view name);

// Per-axis upper bound; strict means key < bound, otherwise key <= bound.
struct Box {
  std::vector<Coord> bound;
  std::vector<char> strict;

  static Box strict_below(std::vector<Coord> bound);
};

struct Hit {
  std::uint32_t id = 0;
  WeightValue value = 0;

  friend bool operator==(const Hit&, const Hit&) = default;
};

// Ids are positions in the key array given to build(). Values start at 0.
// Among equal values the smallest id wins.
class Index {
 public:
  virtual ~Index() = default;

  virtual std::optional<Hit> query_max(const Box& box) = 0;

  // Throws StructuralError on an unknown id and ContractViolation when the
  // value would decrease.
  virtual void update(std::uint32_t id, WeightValue value) = 0;

  virtual std::size_t node_count() const = 0;

  // Recomputes every aggregate from scratch; true when all stored maxima agree.
  virtual bool audit() const = 0;

  std::size_t size() const noexcept { return values_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  WeightValue value(std::uint32_t id) const { return values_.at(id); }

  std::uint64_t visits() const noexcept { return visits_; }
  void reset_visits() noexcept { visits_ = 0; }

 protected:
  Index(std::size_t dim, std::size_t n) : dim_(dim), values_(n, 0) {}

  // Records value for id after validation; returns false when unchanged.
  bool set_value(std::uint32_t id, WeightValue value);

  bool better(std::uint32_t a, std::uint32_t b) const {
    return values_[a] > values_[b] || (values_[a] == values_[b] && a < b);
  }

  std::size_t dim_;
  std::vector<WeightValue> values_;
  std::uint64_t visits_ = 0;
};

// keys: n * dim coordinates, row-major.
std::unique_ptr<Index> build(IndexKind kind, std::size_t dim, std::vector<Coord> keys);

}  // namespace opmatch::rangeindex
