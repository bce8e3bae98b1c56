#include "opmatch/rangeindex.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "opmatch/errors.h"

namespace opmatch::rangeindex {

const char* to_string(IndexKind kind) {
  switch (kind) {
    case IndexKind::range_tree: return "range-tree";
    case IndexKind::kd_tree: return "kd-tree";
    case IndexKind::naive: return "naive";
  }
  return "?";
}

IndexKind parse_index_kind(std::string_view name) {
  if (name == "range-tree" || name == "range_tree") return IndexKind::range_tree;
  if (name == "kd-tree" || name == "kd_tree") return IndexKind::kd_tree;
  if (name == "naive") return IndexKind::naive;
  throw ConfigError("unknown index kind '" + std::string(name) + "'");
}

Box Box::strict_below(std::vector<Coord> bound) {
  Box b;
  b.strict.assign(bound.size(), 1);
  b.bound = std::move(bound);
  return b;
}

bool Index::set_value(std::uint32_t id, WeightValue value) {
  if (id >= values_.size()) throw StructuralError("unknown index id " + std::to_string(id));
  if (value < values_[id]) throw ContractViolation("index values may only increase");
  if (value == values_[id]) return false;
  values_[id] = value;
  return true;
}

namespace {

void check_box(const Box& box, std::size_t dim) {
  if (box.bound.size() != dim || box.strict.size() != dim) {
    throw StructuralError("query box dimension mismatch");
  }
}

inline bool below(Coord key, const Box& box, std::size_t axis) {
  return box.strict[axis] ? key < box.bound[axis] : key <= box.bound[axis];
}

inline std::uint32_t lowbit(std::uint32_t i) { return i & (0u - i); }

class NaiveIndex final : public Index {
 public:
  NaiveIndex(std::size_t dim, std::vector<Coord> keys)
      : Index(dim, dim ? keys.size() / dim : 0), keys_(std::move(keys)) {}

  std::optional<Hit> query_max(const Box& box) override {
    check_box(box, dim_);
    std::optional<std::uint32_t> best;
    for (std::uint32_t id = 0; id < values_.size(); ++id) {
      ++visits_;
      bool inside = true;
      for (std::size_t k = 0; k < dim_ && inside; ++k) inside = below(keys_[id * dim_ + k], box, k);
      if (inside && (!best || better(id, *best))) best = id;
    }
    if (!best) return std::nullopt;
    return Hit{*best, values_[*best]};
  }

  void update(std::uint32_t id, WeightValue value) override { set_value(id, value); }
  std::size_t node_count() const override { return values_.size(); }
  bool audit() const override { return true; }

 private:
  std::vector<Coord> keys_;
};

// Nested Fenwick trees, one level per key axis. A level-l node is a Fenwick
// tree over the distinct axis-l values of its items; position i covers ranks
// (i - lowbit(i), i] and owns a child node (or, on the last level, an argmax
// slot) built from exactly those items.
class RangeTree final : public Index {
 public:
  RangeTree(std::size_t dim, std::vector<Coord> keys)
      : Index(dim, dim ? keys.size() / dim : 0), keys_(std::move(keys)) {
    construct(values_, nodes_, vals_, best_);
  }

  std::optional<Hit> query_max(const Box& box) override {
    check_box(box, dim_);
    if (values_.empty()) return std::nullopt;
    std::optional<std::uint32_t> best;
    query(0, 0, box, best);
    if (!best) return std::nullopt;
    return Hit{*best, values_[*best]};
  }

  void update(std::uint32_t id, WeightValue value) override {
    if (!set_value(id, value)) return;
    push(0, 0, id);
  }

  std::size_t node_count() const override { return best_.size() + vals_.size(); }

  bool audit() const override {
    std::vector<Node> nodes;
    std::vector<Coord> vals;
    std::vector<std::uint32_t> best;
    construct(values_, nodes, vals, best);
    return best == best_;
  }

 private:
  struct Node {
    std::uint32_t vals_off = 0;
    std::uint32_t len = 0;
    std::uint32_t child_off = 0;  // first child node, or first argmax slot
  };

  Coord key(std::uint32_t id, std::size_t axis) const { return keys_[id * dim_ + axis]; }

  void query(std::uint32_t node_idx, std::size_t level, const Box& box,
             std::optional<std::uint32_t>& best) {
    const Node& node = nodes_[node_idx];
    const Coord* v = vals_.data() + node.vals_off;
    const Coord b = box.bound[level];
    std::uint32_t r = static_cast<std::uint32_t>(
        (box.strict[level] ? std::lower_bound(v, v + node.len, b)
                           : std::upper_bound(v, v + node.len, b)) - v);
    const bool last = level + 1 == dim_;
    for (; r > 0; r -= lowbit(r)) {
      ++visits_;
      if (last) {
        const std::uint32_t cand = best_[node.child_off + r - 1];
        if (!best || better(cand, *best)) best = cand;
      } else {
        query(node.child_off + r - 1, level + 1, box, best);
      }
    }
  }

  void push(std::uint32_t node_idx, std::size_t level, std::uint32_t id) {
    const Node& node = nodes_[node_idx];
    const Coord* v = vals_.data() + node.vals_off;
    std::uint32_t r = static_cast<std::uint32_t>(
        std::lower_bound(v, v + node.len, key(id, level)) - v) + 1;
    const bool last = level + 1 == dim_;
    for (; r <= node.len; r += lowbit(r)) {
      if (last) {
        std::uint32_t& slot = best_[node.child_off + r - 1];
        if (better(id, slot)) slot = id;
      } else {
        push(node.child_off + r - 1, level + 1, id);
      }
    }
  }

  // Breadth-first over levels; `items` holds the id lists of the current
  // level's nodes back to back.
  void construct(const std::vector<WeightValue>& values, std::vector<Node>& nodes,
                 std::vector<Coord>& vals, std::vector<std::uint32_t>& best) const {
    nodes.clear();
    vals.clear();
    best.clear();
    const std::size_t n = values.size();
    if (n == 0) return;
    if (n >= UINT32_MAX / 2) throw CapacityError("too many index keys");

    std::vector<std::uint32_t> items(n);
    std::iota(items.begin(), items.end(), 0u);
    std::vector<std::size_t> bounds{0, n};  // node j owns items[bounds[j], bounds[j+1])
    nodes.push_back(Node{});
    std::size_t level_begin = 0;

    std::vector<std::uint32_t> ranks, fill, order;
    for (std::size_t level = 0; level < dim_; ++level) {
      const bool last = level + 1 == dim_;
      const std::size_t level_nodes = bounds.size() - 1;
      std::vector<std::uint32_t> next_items;
      std::vector<std::size_t> next_bounds{0};

      for (std::size_t j = 0; j < level_nodes; ++j) {
        const std::uint32_t* first = items.data() + bounds[j];
        const std::size_t count = bounds[j + 1] - bounds[j];
        Node& node = nodes[level_begin + j];

        order.assign(first, first + count);
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
          const Coord ka = key(a, level), kb = key(b, level);
          return ka < kb || (ka == kb && a < b);
        });
        node.vals_off = static_cast<std::uint32_t>(vals.size());
        ranks.resize(count);
        for (std::size_t t = 0; t < count; ++t) {
          const Coord k = key(order[t], level);
          if (vals.size() == node.vals_off || vals.back() != k) vals.push_back(k);
          ranks[t] = static_cast<std::uint32_t>(vals.size() - node.vals_off);
        }
        node.len = static_cast<std::uint32_t>(vals.size() - node.vals_off);
        const std::uint32_t len = node.len;

        if (last) {
          node.child_off = static_cast<std::uint32_t>(best.size());
          best.resize(best.size() + len, UINT32_MAX);
          for (std::size_t t = 0; t < count; ++t) {
            for (std::uint32_t r = ranks[t]; r <= len; r += lowbit(r)) {
              std::uint32_t& slot = best[node.child_off + r - 1];
              const std::uint32_t id = order[t];
              if (slot == UINT32_MAX || values[id] > values[slot] ||
                  (values[id] == values[slot] && id < slot)) {
                slot = id;
              }
            }
          }
        } else {
          // Children are appended after the current level, in order.
          node.child_off = static_cast<std::uint32_t>(nodes.size() + next_bounds.size() - 1);
          // Bucket sizes per Fenwick position, then fill in rank order.
          fill.assign(len + 1, 0);
          for (std::size_t t = 0; t < count; ++t) {
            for (std::uint32_t r = ranks[t]; r <= len; r += lowbit(r)) ++fill[r];
          }
          const std::size_t base = next_items.size();
          std::size_t acc = base;
          std::vector<std::size_t> start(len + 1);
          for (std::uint32_t r = 1; r <= len; ++r) {
            start[r] = acc;
            acc += fill[r];
            next_bounds.push_back(acc);
          }
          next_items.resize(acc);
          for (std::size_t t = 0; t < count; ++t) {
            for (std::uint32_t r = ranks[t]; r <= len; r += lowbit(r)) {
              next_items[start[r]++] = order[t];
            }
          }
        }
      }

      if (!last) {
        const std::size_t created = next_bounds.size() - 1;
        level_begin = nodes.size();
        nodes.resize(nodes.size() + created);
        items = std::move(next_items);
        bounds = std::move(next_bounds);
      }
    }
  }

  std::vector<Coord> keys_;
  std::vector<Node> nodes_;
  std::vector<Coord> vals_;
  std::vector<std::uint32_t> best_;
};

class KdTree final : public Index {
 public:
  KdTree(std::size_t dim, std::vector<Coord> keys)
      : Index(dim, dim ? keys.size() / dim : 0), keys_(std::move(keys)) {
    const std::size_t n = values_.size();
    if (n == 0) return;
    nodes_.reserve(n);
    lo_.reserve(n * dim_);
    hi_.reserve(n * dim_);
    node_of_.assign(n, 0);
    std::vector<std::uint32_t> ids(n);
    std::iota(ids.begin(), ids.end(), 0u);
    root_ = make(ids, 0, n, 0, -1);
  }

  std::optional<Hit> query_max(const Box& box) override {
    check_box(box, dim_);
    if (nodes_.empty()) return std::nullopt;
    std::optional<std::uint32_t> best;
    query(root_, box, best);
    if (!best) return std::nullopt;
    return Hit{*best, values_[*best]};
  }

  void update(std::uint32_t id, WeightValue value) override {
    if (!set_value(id, value)) return;
    for (std::int32_t at = static_cast<std::int32_t>(node_of_[id]); at >= 0; at = nodes_[at].parent) {
      std::uint32_t& b = nodes_[at].best;
      if (b != id) {
        if (!better(id, b)) break;
        b = id;
      }
    }
  }

  std::size_t node_count() const override { return nodes_.size(); }

  bool audit() const override {
    if (nodes_.empty()) return true;
    bool ok = true;
    recompute(root_, ok);
    return ok;
  }

 private:
  struct Node {
    std::uint32_t id = 0;
    std::uint32_t best = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::int32_t parent = -1;
  };

  Coord key(std::uint32_t id, std::size_t axis) const { return keys_[id * dim_ + axis]; }

  std::int32_t make(std::vector<std::uint32_t>& ids, std::size_t begin, std::size_t end,
                    std::size_t depth, std::int32_t parent) {
    if (begin >= end) return -1;
    const std::size_t axis = depth % dim_;
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(ids.begin() + static_cast<std::ptrdiff_t>(begin),
                     ids.begin() + static_cast<std::ptrdiff_t>(mid),
                     ids.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::uint32_t a, std::uint32_t b) {
                       const Coord ka = key(a, axis), kb = key(b, axis);
                       return ka < kb || (ka == kb && a < b);
                     });
    const auto at = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(Node{});
    lo_.resize(lo_.size() + dim_);
    hi_.resize(hi_.size() + dim_);
    const std::uint32_t id = ids[mid];
    nodes_[at].id = id;
    nodes_[at].parent = parent;
    node_of_[id] = static_cast<std::uint32_t>(at);
    std::uint32_t best = id;
    for (std::size_t k = 0; k < dim_; ++k) {
      lo_[at * dim_ + k] = key(id, k);
      hi_[at * dim_ + k] = key(id, k);
    }
    for (int side = 0; side < 2; ++side) {
      const std::int32_t child = side == 0 ? make(ids, begin, mid, depth + 1, at)
                                           : make(ids, mid + 1, end, depth + 1, at);
      if (side == 0) nodes_[at].left = child; else nodes_[at].right = child;
      if (child < 0) continue;
      for (std::size_t k = 0; k < dim_; ++k) {
        lo_[at * dim_ + k] = std::min(lo_[at * dim_ + k], lo_[child * dim_ + k]);
        hi_[at * dim_ + k] = std::max(hi_[at * dim_ + k], hi_[child * dim_ + k]);
      }
      if (nodes_[child].best < best) best = nodes_[child].best;
    }
    nodes_[at].best = best;  // all values are 0, so the smallest id
    return at;
  }

  void query(std::int32_t at, const Box& box, std::optional<std::uint32_t>& best) {
    ++visits_;
    const Node& node = nodes_[at];
    if (best && !better(node.best, *best)) return;
    bool all_inside = true;
    for (std::size_t k = 0; k < dim_; ++k) {
      if (!below(lo_[at * dim_ + k], box, k)) return;
      if (!below(hi_[at * dim_ + k], box, k)) all_inside = false;
    }
    if (all_inside) {
      best = node.best;
      return;
    }
    bool self = true;
    for (std::size_t k = 0; k < dim_ && self; ++k) self = below(key(node.id, k), box, k);
    if (self && (!best || better(node.id, *best))) best = node.id;
    if (node.left >= 0) query(node.left, box, best);
    if (node.right >= 0) query(node.right, box, best);
  }

  std::uint32_t recompute(std::int32_t at, bool& ok) const {
    const Node& node = nodes_[at];
    std::uint32_t b = node.id;
    for (std::int32_t child : {node.left, node.right}) {
      if (child < 0) continue;
      const std::uint32_t c = recompute(child, ok);
      if (better(c, b)) b = c;
    }
    if (b != node.best) ok = false;
    return b;
  }

  std::vector<Coord> keys_;
  std::vector<Node> nodes_;
  std::vector<Coord> lo_, hi_;
  std::vector<std::uint32_t> node_of_;
  std::int32_t root_ = -1;
};

}  // namespace

std::unique_ptr<Index> build(IndexKind kind, std::size_t dim, std::vector<Coord> keys) {
  if (dim == 0) throw StructuralError("index dimension must be at least 1");
  if (keys.size() % dim != 0) throw StructuralError("key array length is not a multiple of dim");
  switch (kind) {
    case IndexKind::range_tree: return std::make_unique<RangeTree>(dim, std::move(keys));
    case IndexKind::kd_tree: return std::make_unique<KdTree>(dim, std::move(keys));
    case IndexKind::naive: return std::make_unique<NaiveIndex>(dim, std::move(keys));
  }
  throw ConfigError("unknown index kind");
}

}  // namespace opmatch::rangeindex
