#include "opmatch/exact.h"

#include <chrono>
#include <string>

#include "opmatch/errors.h"

namespace opmatch::exact {

namespace {

class Search {
 public:
  Search(const Dataset& P, const Dataset& Q, const WeightTable& table, const SearchBudget& budget)
      : P_(P), Q_(Q), table_(table), budget_(budget), n_(P.size()), m_(Q.size()),
        words_((n_ * m_ + 63) / 64), start_(std::chrono::steady_clock::now()) {
    incompat_.assign(n_ * m_ * words_, 0);
    for (std::uint32_t a = 0; a < n_ * m_; ++a) {
      const Edge ea = edge(a);
      for (std::uint32_t b = 0; b < n_ * m_; ++b) {
        const Edge eb = edge(b);
        if (ea.p == eb.p || ea.q == eb.q || conflict_unchecked(P_, Q_, ea, eb)) set(&incompat_[a * words_], b);
      }
    }
  }

  void run() {
    std::vector<std::uint64_t> blocked(words_, 0);
    go(0, blocked, 0);
  }

  Matching best_matching() const { return Matching{best_edges_}; }
  WeightValue best_weight() const { return best_; }
  bool complete() const { return !aborted_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  Edge edge(std::uint32_t id) const {
    return Edge{static_cast<std::uint32_t>(id / m_), static_cast<std::uint32_t>(id % m_)};
  }
  static void set(std::uint64_t* bits, std::uint32_t i) { bits[i >> 6] |= std::uint64_t{1} << (i & 63); }
  static bool test(const std::vector<std::uint64_t>& bits, std::size_t i) {
    return (bits[i >> 6] >> (i & 63)) & 1;
  }

  bool out_of_budget() {
    if (nodes_ > budget_.max_nodes) return true;
    if (budget_.time_limit && (nodes_ & 1023) == 0) {
      const std::chrono::duration<double> spent = std::chrono::steady_clock::now() - start_;
      if (spent.count() > *budget_.time_limit) return true;
    }
    return false;
  }

  // min of two admissible bounds: best free edge per remaining P point, and
  // best free edge per Q point among the remaining P points.
  WeightValue bound(std::size_t i, const std::vector<std::uint64_t>& blocked) {
    WeightValue by_p = 0;
    col_best_.assign(m_, 0);
    for (std::size_t a = i; a < n_; ++a) {
      WeightValue row = 0;
      for (std::size_t b = 0; b < m_; ++b) {
        if (test(blocked, a * m_ + b)) continue;
        const WeightValue v = table_(a, b);
        if (v > row) row = v;
        if (v > col_best_[b]) col_best_[b] = v;
      }
      by_p += row;
    }
    WeightValue by_q = 0;
    for (WeightValue v : col_best_) by_q += v;
    return by_p < by_q ? by_p : by_q;
  }

  void go(std::size_t i, const std::vector<std::uint64_t>& blocked, WeightValue acc) {
    if (aborted_) return;
    ++nodes_;
    if (out_of_budget()) {
      aborted_ = true;
      return;
    }
    if (acc > best_) {
      best_ = acc;
      best_edges_ = chosen_;
    }
    if (i == n_) return;
    if (acc + bound(i, blocked) <= best_) return;
    std::vector<std::uint64_t> next(words_);
    for (std::uint32_t j = 0; j < m_; ++j) {
      const std::uint32_t id = static_cast<std::uint32_t>(i * m_ + j);
      if (test(blocked, id)) continue;
      const std::uint64_t* inc = &incompat_[id * words_];
      for (std::size_t w = 0; w < words_; ++w) next[w] = blocked[w] | inc[w];
      chosen_.push_back(edge(id));
      go(i + 1, next, acc + table_(i, j));
      chosen_.pop_back();
      if (aborted_) return;
    }
    go(i + 1, blocked, acc);
  }

  const Dataset& P_;
  const Dataset& Q_;
  const WeightTable& table_;
  const SearchBudget& budget_;
  std::size_t n_, m_, words_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::uint64_t> incompat_;
  std::vector<WeightValue> col_best_;
  std::vector<Edge> chosen_, best_edges_;
  WeightValue best_ = 0;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
};

}  // namespace

ExactResult exact_max_matching(const Dataset& P, const Dataset& Q, const WeightSpec& w,
                               const SearchBudget& budget) {
  if (P.dim() != Q.dim()) throw StructuralError("P and Q dimensions differ");
  if (budget.max_points == 0 || budget.max_nodes == 0 ||
      (budget.time_limit && *budget.time_limit <= 0)) {
    throw ConfigError("search budget caps must be positive");
  }
  const std::size_t small = std::min(P.size(), Q.size());
  if (small > budget.max_points) {
    throw SizeLimitError("instance has min(|P|,|Q|) = " + std::to_string(small) +
                         ", above the exact-search cap of " + std::to_string(budget.max_points));
  }
  const WeightTable table(P, Q, w);
  ExactResult out;
  if (small == 0) {
    out.weight = 0;
    out.proof_of_optimality = true;
    return out;
  }
  Search search(P, Q, table, budget);
  search.run();
  out.matching = search.best_matching();
  out.matching.sort();
  out.weight = table.to_rational(search.best_weight());
  out.proof_of_optimality = search.complete();
  out.nodes = search.nodes();
  return out;
}

}  // namespace opmatch::exact
