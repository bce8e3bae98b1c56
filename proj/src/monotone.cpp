#include "opmatch/monotone.h"

#include <algorithm>
#include <numeric>

#include "opmatch/errors.h"

namespace opmatch::monotone {

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::inc: return "monotone-inc";
    case Mode::dec: return "monotone-dec";
    case Mode::mix: return "monotone-mix";
  }
  return "?";
}

std::vector<char> direction_mask(Direction dir, std::size_t dim) {
  std::vector<char> mask(dim, dir == Direction::decreasing ? 1 : 0);
  if (dim > 0) mask[0] = 0;
  return mask;
}

std::vector<std::vector<char>> all_masks(std::size_t dim) {
  std::vector<std::vector<char>> out;
  if (dim == 0) return out;
  const std::size_t count = std::size_t{1} << (dim - 1);
  for (std::size_t bits = 0; bits < count; ++bits) {
    std::vector<char> mask(dim, 0);
    for (std::size_t k = 1; k < dim; ++k) mask[k] = static_cast<char>((bits >> (k - 1)) & 1);
    out.push_back(std::move(mask));
  }
  return out;
}

Chain heaviest_monotone_chain(const Dataset& P, const Dataset& Q, const Matching& M,
                              const std::vector<char>& negate, const WeightTable& weights,
                              rangeindex::IndexKind index, std::vector<ChainCell>* cells) {
  if (P.dim() != Q.dim()) throw StructuralError("P and Q dimensions differ");
  const std::size_t d = P.dim();
  if (negate.size() != d || negate[0]) throw ContractViolation("bad direction mask");

  Chain out;
  const MatchedFlags used(M, P.size(), Q.size());
  std::vector<Edge> cand;
  for (std::uint32_t i = 0; i < P.size(); ++i) {
    if (used.p[i]) continue;
    for (std::uint32_t j = 0; j < Q.size(); ++j) {
      if (used.q[j]) continue;
      const Edge e{i, j};
      if (!conflicts_with_any(e, M, P, Q)) cand.push_back(e);
    }
  }
  out.candidates = cand.size();
  if (cells) cells->clear();
  if (cand.empty()) return out;

  auto tp = [&](std::uint32_t i, std::size_t k) { return negate[k] ? -P.coord(i, k) : P.coord(i, k); };
  auto tq = [&](std::uint32_t j, std::size_t k) { return negate[k] ? -Q.coord(j, k) : Q.coord(j, k); };

  // Key: transformed P axes 1..d-1, then transformed Q axes 0..d-1.
  const std::size_t kdim = 2 * d - 1;
  std::vector<Coord> keys(cand.size() * kdim);
  for (std::size_t c = 0; c < cand.size(); ++c) {
    Coord* row = keys.data() + c * kdim;
    for (std::size_t k = 1; k < d; ++k) *row++ = tp(cand[c].p, k);
    for (std::size_t k = 0; k < d; ++k) *row++ = tq(cand[c].q, k);
  }

  std::vector<std::uint32_t> order(cand.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (tp(cand[a].p, 0) != tp(cand[b].p, 0)) return tp(cand[a].p, 0) < tp(cand[b].p, 0);
    for (std::size_t k = 0; k < kdim; ++k) {
      if (keys[a * kdim + k] != keys[b * kdim + k]) return keys[a * kdim + k] < keys[b * kdim + k];
    }
    return a < b;
  });

  auto idx = rangeindex::build(index, kdim, keys);
  std::vector<WeightValue> value(cand.size(), 0);
  std::vector<std::uint32_t> pred(cand.size(), UINT32_MAX);
  rangeindex::Box box;
  box.strict.assign(kdim, 1);
  box.bound.resize(kdim);

  // Candidates sharing a first P coordinate are all queried before any is
  // inserted, so a predecessor always has a strictly smaller first coordinate.
  std::size_t g = 0;
  while (g < order.size()) {
    std::size_t h = g;
    const Coord x = tp(cand[order[g]].p, 0);
    while (h < order.size() && tp(cand[order[h]].p, 0) == x) ++h;
    for (std::size_t t = g; t < h; ++t) {
      const std::uint32_t c = order[t];
      std::copy_n(keys.begin() + static_cast<std::ptrdiff_t>(c * kdim), kdim, box.bound.begin());
      WeightValue v = weights.at(cand[c]);
      if (auto hit = idx->query_max(box); hit && hit->value > 0) {
        v = checked_add(v, hit->value);
        pred[c] = hit->id;
      }
      value[c] = v;
    }
    for (std::size_t t = g; t < h; ++t) idx->update(order[t], value[order[t]]);
    g = h;
  }

  std::uint32_t best = 0;
  for (std::uint32_t c = 1; c < cand.size(); ++c) {
    if (value[c] > value[best]) best = c;
  }
  out.weight = value[best];
  for (std::uint32_t c = best; c != UINT32_MAX; c = pred[c]) out.edges.push_back(cand[c]);
  std::reverse(out.edges.begin(), out.edges.end());

  if (cells) {
    cells->reserve(cand.size());
    for (std::uint32_t c : order) {
      ChainCell cell{cand[c], value[c], std::nullopt};
      if (pred[c] != UINT32_MAX) cell.predecessor = cand[pred[c]];
      cells->push_back(cell);
    }
  }
  return out;
}

Chain heaviest_monotone_chain(const Dataset& P, const Dataset& Q, const Matching& M,
                              Direction dir, const WeightTable& weights,
                              rangeindex::IndexKind index) {
  return heaviest_monotone_chain(P, Q, M, direction_mask(dir, P.dim()), weights, index);
}

GreedyResult greedy_monotone(const Dataset& P, const Dataset& Q, const WeightSpec& w,
                             Mode mode, rangeindex::IndexKind index) {
  if (P.dim() != Q.dim()) throw StructuralError("P and Q dimensions differ");
  GreedyResult out;
  if (P.empty() || Q.empty()) return out;
  const WeightTable weights(P, Q, w);
  const std::size_t d = P.dim();

  std::vector<std::vector<char>> masks;
  switch (mode) {
    case Mode::inc: masks.push_back(direction_mask(Direction::increasing, d)); break;
    case Mode::dec: masks.push_back(direction_mask(Direction::decreasing, d)); break;
    case Mode::mix: masks = all_masks(d); break;
  }

  const std::size_t limit = std::min(P.size(), Q.size());
  for (std::size_t iter = 0; iter < limit; ++iter) {
    Chain best;
    bool have = false;
    for (const auto& mask : masks) {
      Chain c = heaviest_monotone_chain(P, Q, out.matching, mask, weights, index);
      if (!have || c.weight > best.weight) {
        best = std::move(c);
        have = true;
      }
    }
    if (best.edges.empty() || best.weight <= 0) break;
    out.matching.edges.insert(out.matching.edges.end(), best.edges.begin(), best.edges.end());
    out.chain_lengths.push_back(best.edges.size());
  }
  out.matching.sort();
  return out;
}

}  // namespace opmatch::monotone
