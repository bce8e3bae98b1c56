#include "opmatch/datagen.h"

#include <algorithm>
#include <numeric>
#include <string>
#include <set>

#include "opmatch/errors.h"
#include "opmatch/rng.h"

namespace opmatch::datagen {

namespace {

struct Prob {
  std::uint64_t num = 0, den = 1;
};

Prob to_prob(const Rational& r, const char* name) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den > BigInt(UINT64_MAX)) {
    throw ConfigError(std::string(name) + " has a denominator above 2^64");
  }
  return Prob{static_cast<std::uint64_t>(num), static_cast<std::uint64_t>(den)};
}

void check_probability(const Rational& v, bool allow_one, const char* name) {
  if (v <= 0 || v > 1 || (!allow_one && v == 1)) {
    throw ConfigError(std::string(name) + " must lie in (0,1" + (allow_one ? "]" : ")"));
  }
}

Dataset thin(const Dataset& R, Prob keep, Prob retain, Rng& rng) {
  std::vector<Dataset::Row> rows;
  for (const Point& r : R) {
    if (!rng.bernoulli(keep.num, keep.den)) continue;
    const std::int64_t c = rng.binomial(r.raw_count, retain.num, retain.den);
    if (c > 0) rows.push_back(Dataset::Row{r.coords, c});
  }
  return Dataset::from_rows(R.dim(), std::move(rows), false, R.scale());
}

Truth identity_truth(const Dataset& Q) {
  Truth t;
  t.reserve(Q.size());
  for (const Point& q : Q) t.emplace_back(q.coords);
  return t;
}

}  // namespace

void validate(const GenParams& p) {
  if (p.dim == 0) throw ConfigError("dimension must be at least 1");
  if (p.superset_size == 0) throw ConfigError("superset size must be at least 1");
  if (p.extent.size() != p.dim) throw ConfigError("extent needs one bound per axis");
  for (Coord e : p.extent) if (e <= 0) throw ConfigError("extent must be positive");
  if (p.f_min < 1 || p.f_max < p.f_min) throw ConfigError("need 1 <= f_min <= f_max");
  check_probability(p.beta, false, "beta");
  check_probability(p.p_bion, true, "p_bion");
}

Dataset generate_superset(const GenParams& p) {
  validate(p);
  unsigned __int128 cells = 1;
  for (Coord e : p.extent) {
    cells *= static_cast<unsigned __int128>(e);
    if (cells > (static_cast<unsigned __int128>(1) << 100)) break;
  }
  if (cells < p.superset_size) {
    throw CapacityError("grid has fewer cells than the requested superset size");
  }
  Rng rng = Rng::stream(p.seed, "generate.superset");
  // Floyd's algorithm over linear cell indices: exactly superset_size distinct cells.
  std::set<unsigned __int128> chosen;
  std::vector<unsigned __int128> picked;
  picked.reserve(p.superset_size);
  for (unsigned __int128 j = cells - p.superset_size; j < cells; ++j) {
    unsigned __int128 t = rng.below128(j + 1);
    if (!chosen.insert(t).second) {
      t = j;
      chosen.insert(t);
    }
    picked.push_back(t);
  }
  std::vector<Dataset::Row> rows;
  rows.reserve(picked.size());
  for (unsigned __int128 cell : picked) {
    Coords c(p.dim);
    for (std::size_t k = p.dim; k-- > 0;) {
      const auto e = static_cast<unsigned __int128>(p.extent[k]);
      c[k] = static_cast<Coord>(cell % e);
      cell /= e;
    }
    rows.push_back(Dataset::Row{std::move(c), rng.uniform_int(p.f_min, p.f_max)});
  }
  return Dataset::from_rows(p.dim, std::move(rows), false);
}

Sample sample_case1(const Dataset& R, const Rational& beta, const Rational& p_bion,
                    std::uint64_t seed) {
  check_probability(beta, true, "beta");
  check_probability(p_bion, true, "p_bion");
  Rng rng = Rng::stream(seed, "sample.Q");
  Sample s;
  s.P = R;
  s.Q = thin(R, to_prob(beta, "beta"), to_prob(p_bion, "p_bion"), rng);
  if (s.Q.empty()) throw EmptySampleError("Q is empty after sampling; retry with another seed");
  s.truth = identity_truth(s.Q);
  return s;
}

Sample sample_case2(const Dataset& R, const Rational& beta, const Rational& p_bion,
                    std::uint64_t seed) {
  check_probability(beta, true, "beta");
  check_probability(p_bion, true, "p_bion");
  Rng rp = Rng::stream(seed, "sample.P");
  Rng rq = Rng::stream(seed, "sample.Q");
  const Prob b = to_prob(beta, "beta"), pb = to_prob(p_bion, "p_bion");
  Sample s;
  s.P = thin(R, b, pb, rp);
  s.Q = thin(R, b, pb, rq);
  if (s.P.empty() || s.Q.empty()) {
    throw EmptySampleError("P or Q is empty after sampling; retry with another seed");
  }
  s.truth = identity_truth(s.Q);
  return s;
}

Dataset permutation_to_points(const std::vector<int>& perm) {
  const std::size_t n = perm.size();
  std::vector<char> seen(n + 1, 0);
  for (int v : perm) {
    if (v < 1 || static_cast<std::size_t>(v) > n || seen[v]) {
      throw ValidationError("not a permutation of 1..n");
    }
    seen[v] = 1;
  }
  std::vector<Dataset::Row> rows;
  for (std::size_t i = 0; i < n; ++i) rows.push_back(Dataset::Row{{static_cast<Coord>(i + 1), perm[i]}, 1});
  return Dataset::from_rows(2, std::move(rows));
}

bool sum_decomposable(const std::vector<int>& perm) {
  int prefix_max = 0;
  for (std::size_t k = 0; k + 1 < perm.size(); ++k) {
    prefix_max = std::max(prefix_max, perm[k]);
    if (prefix_max == static_cast<int>(k + 1)) return true;
  }
  return false;
}

BlockInstance permutation_blocks(std::size_t n, std::size_t chosen_index, std::int64_t count) {
  if (n == 0 || n > 8) throw ConfigError("block size must be in 1..8");
  if (count < 1) throw ConfigError("block count must be positive");
  std::vector<std::vector<int>> perms;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 1);
  do perms.push_back(perm); while (std::next_permutation(perm.begin(), perm.end()));
  if (chosen_index >= perms.size()) throw ConfigError("block index out of range");

  BlockInstance out;
  out.chosen = perms[chosen_index];
  out.chosen_index = chosen_index;
  out.anti_diagonal = sum_decomposable(out.chosen);
  const std::size_t blocks = perms.size();
  std::vector<Dataset::Row> prow, qrow;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t ys = out.anti_diagonal ? blocks - 1 - b : b;
    for (std::size_t i = 0; i < n; ++i) {
      Coords c{static_cast<Coord>(b * n + i), static_cast<Coord>(ys * n + perms[b][i] - 1)};
      if (b == chosen_index) qrow.push_back(Dataset::Row{c, count});
      prow.push_back(Dataset::Row{std::move(c), count});
    }
  }
  out.P = Dataset::from_rows(2, std::move(prow), false);
  out.Q = Dataset::from_rows(2, std::move(qrow), false);
  out.truth = identity_truth(out.Q);
  return out;
}

}  // namespace opmatch::datagen
