#include "opmatch/oracle.h"

#include <algorithm>
#include <functional>
#include <map>

#include "opmatch/errors.h"

namespace opmatch::oracle {

namespace {

bool increasing_map(std::vector<std::pair<Coord, Coord>> pairs) {
  std::sort(pairs.begin(), pairs.end());
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    const auto& a = pairs[i - 1];
    const auto& b = pairs[i];
    if (a.first == b.first) {
      if (a.second != b.second) return false;
    } else if (!(a.second < b.second)) {
      return false;
    }
  }
  return true;
}

bool realizable_edges(const std::vector<Edge>& edges, const Dataset& P, const Dataset& Q) {
  std::map<std::uint32_t, int> pu, qu;
  for (Edge e : edges) {
    if (++pu[e.p] > 1 || ++qu[e.q] > 1) return false;
  }
  for (std::size_t k = 0; k < P.dim(); ++k) {
    std::vector<std::pair<Coord, Coord>> pairs;
    for (Edge e : edges) pairs.emplace_back(P[e.p].coords[k], Q[e.q].coords[k]);
    if (!increasing_map(std::move(pairs))) return false;
  }
  return true;
}

}  // namespace

bool realizable(const Matching& m, const Dataset& P, const Dataset& Q) {
  return realizable_edges(m.edges, P, Q);
}

Rational max_matching_weight(const Dataset& P, const Dataset& Q, const WeightSpec& w) {
  const WeightSpec spec = resolve(w, P, Q);
  std::vector<Edge> chosen;
  std::vector<char> q_used(Q.size(), 0);
  Rational best = 0;
  std::function<void(std::uint32_t, Rational)> go = [&](std::uint32_t i, Rational acc) {
    if (i == P.size()) {
      if (acc > best) best = acc;
      return;
    }
    go(i + 1, acc);
    for (std::uint32_t j = 0; j < Q.size(); ++j) {
      if (q_used[j]) continue;
      chosen.push_back(Edge{i, j});
      if (realizable_edges(chosen, P, Q)) {
        q_used[j] = 1;
        go(i + 1, acc + edge_weight(P[i], Q[j], spec));
        q_used[j] = 0;
      }
      chosen.pop_back();
    }
  };
  go(0, Rational(0));
  return best;
}

Rational max_noncrossing_weight(const oned::CdfTable& A, const oned::CdfTable& B,
                                const Rational& kappa) {
  Rational best = 0;
  std::function<void(std::size_t, std::size_t, Rational)> go =
      [&](std::size_t i, std::size_t j, Rational acc) {
        if (acc > best) best = acc;
        for (std::size_t a = i; a < A.size(); ++a) {
          for (std::size_t b = j; b < B.size(); ++b) {
            Rational diff = A.cum[a] - B.cum[b];
            if (diff < 0) diff = -diff;
            go(a + 1, b + 1, acc + (kappa - diff));
          }
        }
      };
  go(0, 0, Rational(0));
  return best;
}

Rational max_chain_weight(const Dataset& P, const Dataset& Q, const Matching& M,
                          const std::vector<char>& negate, const WeightSpec& w) {
  const WeightSpec spec = resolve(w, P, Q);
  std::vector<char> pm(P.size(), 0), qm(Q.size(), 0);
  for (Edge e : M.edges) {
    pm[e.p] = 1;
    qm[e.q] = 1;
  }
  std::vector<Edge> cands;
  for (std::uint32_t i = 0; i < P.size(); ++i) {
    for (std::uint32_t j = 0; j < Q.size(); ++j) {
      if (pm[i] || qm[j]) continue;
      std::vector<Edge> with = M.edges;
      with.push_back(Edge{i, j});
      if (realizable_edges(with, P, Q)) cands.push_back(Edge{i, j});
    }
  }
  auto less_all = [&](const Point& a, const Point& b) {
    for (std::size_t k = 0; k < a.coords.size(); ++k) {
      const Coord x = negate[k] ? -a.coords[k] : a.coords[k];
      const Coord y = negate[k] ? -b.coords[k] : b.coords[k];
      if (!(x < y)) return false;
    }
    return true;
  };
  Rational best = 0;
  std::function<void(std::size_t, Rational)> go = [&](std::size_t last, Rational acc) {
    if (acc > best) best = acc;
    for (std::size_t c = 0; c < cands.size(); ++c) {
      if (less_all(P[cands[last].p], P[cands[c].p]) && less_all(Q[cands[last].q], Q[cands[c].q])) {
        go(c, acc + edge_weight(P[cands[c].p], Q[cands[c].q], spec));
      }
    }
  };
  for (std::size_t c = 0; c < cands.size(); ++c) {
    go(c, edge_weight(P[cands[c].p], Q[cands[c].q], spec));
  }
  return best;
}

namespace {

template <class Visit>
void for_each_conflicting(Edge e, const Dataset& P, const Dataset& Q, const Matching& M,
                          Visit visit) {
  std::vector<char> pm(P.size(), 0), qm(Q.size(), 0);
  for (Edge f : M.edges) {
    pm[f.p] = 1;
    qm[f.q] = 1;
  }
  for (std::uint32_t i = 0; i < P.size(); ++i) {
    for (std::uint32_t j = 0; j < Q.size(); ++j) {
      if (pm[i] || qm[j] || i == e.p || j == e.q) continue;
      std::vector<Edge> with = M.edges;
      with.push_back(Edge{i, j});
      if (!realizable_edges(with, P, Q)) continue;
      if (!realizable_edges({e, Edge{i, j}}, P, Q)) visit(Edge{i, j});
    }
  }
}

}  // namespace

Rational conflict_mass(Edge e, const Dataset& P, const Dataset& Q, const Matching& M,
                       const WeightSpec& w) {
  const WeightSpec spec = resolve(w, P, Q);
  Rational total = 0;
  for_each_conflicting(e, P, Q, M, [&](Edge c) { total += edge_weight(P[c.p], Q[c.q], spec); });
  return total;
}

std::int64_t conflict_count_at_least(Edge e, const Dataset& P, const Dataset& Q,
                                     const Matching& M, const WeightSpec& w,
                                     const Rational& threshold) {
  const WeightSpec spec = resolve(w, P, Q);
  std::int64_t count = 0;
  for_each_conflicting(e, P, Q, M, [&](Edge c) {
    if (edge_weight(P[c.p], Q[c.q], spec) >= threshold) ++count;
  });
  return count;
}

bool contains_pattern(const std::vector<int>& text, const std::vector<int>& pattern) {
  const std::size_t n = text.size(), k = pattern.size();
  if (k == 0) return true;
  if (k > n) return false;
  std::vector<std::size_t> pos(k);
  std::function<bool(std::size_t, std::size_t)> go = [&](std::size_t depth, std::size_t from) {
    if (depth == k) {
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
          if ((pattern[a] < pattern[b]) != (text[pos[a]] < text[pos[b]])) return false;
        }
      }
      return true;
    }
    for (std::size_t i = from; i < n; ++i) {
      pos[depth] = i;
      if (go(depth + 1, i + 1)) return true;
    }
    return false;
  };
  return go(0, 0);
}

}  // namespace opmatch::oracle
