#include "opmatch/randinst.h"

#include <numeric>

namespace opmatch::randinst {

namespace {

template <class T>
void shuffle(Rng& rng, std::vector<T>& v) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

}  // namespace

Dataset tied(Rng& rng, std::size_t n, std::size_t dim, Coord grid, std::int64_t max_count) {
  std::vector<Dataset::Row> rows;
  for (std::size_t i = 0; i < n; ++i) {
    Coords c(dim);
    for (auto& v : c) v = rng.uniform_int(0, grid - 1);
    rows.push_back(Dataset::Row{std::move(c), rng.uniform_int(1, max_count)});
  }
  return Dataset::from_rows(dim, std::move(rows));
}

Dataset general(Rng& rng, std::size_t n, std::size_t dim, std::int64_t max_count) {
  std::vector<std::vector<Coord>> axes(dim);
  for (auto& a : axes) {
    for (std::size_t i = 0; i < n; ++i) a.push_back(static_cast<Coord>(i) * 3 + 1);
    shuffle(rng, a);
  }
  std::vector<Dataset::Row> rows;
  for (std::size_t i = 0; i < n; ++i) {
    Coords c(dim);
    for (std::size_t k = 0; k < dim; ++k) c[k] = axes[k][i];
    rows.push_back(Dataset::Row{std::move(c), rng.uniform_int(1, max_count)});
  }
  return Dataset::from_rows(dim, std::move(rows));
}

Matching partial_matching(Rng& rng, const Dataset& P, const Dataset& Q, double fraction) {
  std::vector<Edge> all;
  for (std::uint32_t i = 0; i < P.size(); ++i) {
    for (std::uint32_t j = 0; j < Q.size(); ++j) all.push_back(Edge{i, j});
  }
  shuffle(rng, all);
  const auto target = static_cast<std::size_t>(fraction * static_cast<double>(std::min(P.size(), Q.size())));
  Matching m;
  MatchedFlags used(P.size(), Q.size());
  for (Edge e : all) {
    if (m.size() >= target) break;
    if (!used.free(e) || conflicts_with_any(e, m, P, Q)) continue;
    m.edges.push_back(e);
    used.add(e);
  }
  m.sort();
  return m;
}

std::vector<int> permutation(Rng& rng, std::size_t n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 1);
  shuffle(rng, p);
  return p;
}

}  // namespace opmatch::randinst
