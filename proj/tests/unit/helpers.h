#pragma once

#include <vector>

#include "opmatch/core.h"
#include "opmatch/rng.h"

namespace testing {

using opmatch::Coords;
using opmatch::Dataset;

inline Dataset make(std::size_t dim, std::vector<std::pair<Coords, std::int64_t>> rows) {
  std::vector<Dataset::Row> out;
  for (auto& [c, n] : rows) out.push_back(Dataset::Row{c, n});
  return Dataset::from_rows(dim, std::move(out));
}

inline Dataset unit_points(std::vector<Coords> pts) {
  std::vector<Dataset::Row> out;
  const std::size_t d = pts.empty() ? 2 : pts[0].size();
  for (auto& c : pts) out.push_back(Dataset::Row{c, 1});
  return Dataset::from_rows(d, std::move(out));
}

// Up to n points on a small grid; small grids give ties.
inline Dataset random_dataset(opmatch::Rng& rng, std::size_t n, std::size_t dim, int grid,
                              int max_count = 5) {
  std::vector<Dataset::Row> rows;
  for (std::size_t i = 0; i < n; ++i) {
    Coords c(dim);
    for (auto& v : c) v = rng.uniform_int(0, grid - 1);
    rows.push_back(Dataset::Row{c, rng.uniform_int(1, max_count)});
  }
  return Dataset::from_rows(dim, std::move(rows));
}

// Exactly n points with pairwise distinct values on every axis.
inline Dataset random_general(opmatch::Rng& rng, std::size_t n, std::size_t dim,
                              int max_count = 5) {
  std::vector<std::vector<opmatch::Coord>> axes(dim);
  for (auto& a : axes) {
    for (std::size_t i = 0; i < n; ++i) a.push_back(static_cast<opmatch::Coord>(i) * 3 + 1);
    for (std::size_t i = n; i > 1; --i) std::swap(a[i - 1], a[rng.below(i)]);
  }
  std::vector<Dataset::Row> rows;
  for (std::size_t i = 0; i < n; ++i) {
    Coords c(dim);
    for (std::size_t k = 0; k < dim; ++k) c[k] = axes[k][i];
    rows.push_back(Dataset::Row{c, rng.uniform_int(1, max_count)});
  }
  return Dataset::from_rows(dim, std::move(rows));
}

}  // namespace testing
