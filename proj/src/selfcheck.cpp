#include "opmatch/selfcheck.h"

#include <cmath>
#include <sstream>

#include "opmatch/exact.h"
#include "opmatch/minconflict.h"
#include "opmatch/monotone.h"
#include "opmatch/oned.h"
#include "opmatch/oracle.h"
#include "opmatch/randinst.h"
#include "opmatch/rangeindex.h"

namespace opmatch::selfcheck {

namespace {

using rangeindex::IndexKind;

constexpr IndexKind kKinds[] = {IndexKind::range_tree, IndexKind::kd_tree, IndexKind::naive};

class Suite {
 public:
  Suite(std::string name, std::uint64_t seed) : rng_(Rng::stream(seed, "oracle-check." + name)) {
    report_.name = std::move(name);
  }

  Rng& rng() { return rng_; }

  void check(bool ok, std::size_t trial, const std::string& what) {
    ++report_.checks;
    if (ok) return;
    if (report_.mismatches++ == 0) {
      report_.first_mismatch = "trial " + std::to_string(trial) + ": " + what;
    }
  }

  SuiteReport done() { return report_; }

 private:
  Rng rng_;
  SuiteReport report_;
};

std::size_t pick(Rng& rng, std::size_t cap) { return 1 + rng.below(std::max<std::size_t>(cap, 1)); }

WeightSpec weight_for(std::size_t t) { return WeightSpec{static_cast<WeightKind>(t % 3), std::nullopt}; }

SuiteReport exact_suite(std::size_t cap, std::size_t trials, std::uint64_t seed) {
  Suite s("exact", seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t d = t % 5 == 4 ? 3 : 2;
    const Coord grid = t % 2 ? 4 : 20;
    Dataset P = randinst::tied(s.rng(), pick(s.rng(), cap), d, grid);
    Dataset Q = randinst::tied(s.rng(), pick(s.rng(), cap), d, grid);
    const WeightSpec w = weight_for(t);
    exact::ExactResult r = exact::exact_max_matching(P, Q, w);
    s.check(r.proof_of_optimality, t, "no optimality proof");
    s.check(r.weight == oracle::max_matching_weight(P, Q, w), t, "weight differs from enumeration");
    s.check(oracle::realizable(r.matching, P, Q), t, "matching is not realizable");
  }
  return s.done();
}

SuiteReport quadrant_suite(std::size_t cap, std::size_t trials, std::uint64_t seed) {
  Suite s("quadrant", seed);
  for (std::size_t t = 0; t < trials; ++t) {
    Dataset P = randinst::general(s.rng(), pick(s.rng(), 2 * cap), 2);
    Dataset Q = randinst::general(s.rng(), pick(s.rng(), 2 * cap), 2);
    Matching M = randinst::partial_matching(s.rng(), P, Q, static_cast<double>(s.rng().below(4)) / 4.0);
    minconflict::QuadrantCounter qc(P, Q);
    qc.refresh(M);
    for (Edge e : minconflict::surviving_candidates(P, Q, M)) {
      s.check(Rational(minconflict::conflict_count_fast(e, qc)) == oracle::conflict_mass(e, P, Q, M, {}), t,
              "fast count differs from brute force");
    }
  }
  return s.done();
}

SuiteReport chain_suite(std::size_t cap, std::size_t trials, std::uint64_t seed) {
  Suite s("chain", seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t d = t % 4 == 3 ? 3 : 2;
    const Coord grid = t % 2 ? 4 : 12;
    Dataset P = randinst::tied(s.rng(), pick(s.rng(), cap), d, grid);
    Dataset Q = randinst::tied(s.rng(), pick(s.rng(), cap), d, grid);
    Matching M = randinst::partial_matching(s.rng(), P, Q, 0.3);
    const WeightSpec w = weight_for(t);
    WeightTable table(P, Q, w);
    for (const auto& mask : monotone::all_masks(d)) {
      const Rational want = oracle::max_chain_weight(P, Q, M, mask, w);
      for (IndexKind kind : kKinds) {
        monotone::Chain c = monotone::heaviest_monotone_chain(P, Q, M, mask, table, kind);
        s.check(table.to_rational(c.weight) == want, t,
                std::string("chain weight differs, index ") + rangeindex::to_string(kind));
      }
    }
  }
  return s.done();
}

SuiteReport oned_suite(std::size_t cap, std::size_t trials, std::uint64_t seed) {
  Suite s("noncrossing", seed);
  for (std::size_t t = 0; t < trials; ++t) {
    Dataset A = randinst::tied(s.rng(), pick(s.rng(), cap), 1, 12);
    Dataset B = randinst::tied(s.rng(), pick(s.rng(), cap), 1, 12);
    const oned::CdfTable ta = oned::marginal_cdf(A, 0), tb = oned::marginal_cdf(B, 0);
    const Rational kappa = t % 2 ? Rational(1) : make_rational(1, 4);
    s.check(oned::max_weight_noncrossing(ta, tb, kappa).weight == oracle::max_noncrossing_weight(ta, tb, kappa),
            t, "DP weight differs from enumeration");
  }
  return s.done();
}

SuiteReport greedy_suite(std::size_t cap, std::size_t trials, std::uint64_t seed) {
  Suite s("greedy", seed);
  for (std::size_t t = 0; t < trials; ++t) {
    Dataset P = randinst::general(s.rng(), pick(s.rng(), cap), 2);
    Dataset Q = randinst::general(s.rng(), pick(s.rng(), cap), 2);
    const WeightSpec w = weight_for(t);
    const Rational opt = oracle::max_matching_weight(P, Q, w);
    const Matching mix = monotone::greedy_monotone(P, Q, w, monotone::Mode::mix, IndexKind::range_tree).matching;
    s.check(oracle::realizable(mix, P, Q), t, "monotone-mix output not realizable");
    // weight^2 * min(|P|,|Q|) >= opt^2, exact in rationals
    const Rational got = matching_weight(mix, P, Q, w);
    s.check(got * got * Rational(static_cast<std::int64_t>(std::min(P.size(), Q.size()))) >= opt * opt, t,
            "monotone-mix below the approximation bound");
    const Matching mc = minconflict::greedy_min_conflict(P, Q, w, minconflict::Mode::exact());
    s.check(oracle::realizable(mc, P, Q), t, "min-conflict output not realizable");
    s.check(matching_weight(mc, P, Q, w) <= opt, t, "min-conflict exceeds the optimum");
  }
  return s.done();
}

SuiteReport pattern_suite(std::size_t cap, std::size_t trials, std::uint64_t seed) {
  Suite s("pattern", seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t n = pick(s.rng(), cap);
    const std::size_t k = pick(s.rng(), std::min<std::size_t>(n, 4));
    const auto text = randinst::permutation(s.rng(), n);
    const auto pat = randinst::permutation(s.rng(), k);
    auto points = [](const std::vector<int>& perm) {
      std::vector<Dataset::Row> rows;
      for (std::size_t i = 0; i < perm.size(); ++i) rows.push_back({{static_cast<Coord>(i + 1), perm[i]}, 1});
      return Dataset::from_rows(2, std::move(rows));
    };
    const exact::ExactResult r = exact::exact_max_matching(points(text), points(pat), WeightSpec{});
    s.check((r.matching.size() == k) == oracle::contains_pattern(text, pat), t,
            "matching cardinality disagrees with pattern search");
  }
  return s.done();
}

SuiteReport index_suite(std::size_t trials, std::uint64_t seed) {
  Suite s("index", seed);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng& rng = s.rng();
    const std::size_t dim = 1 + t % 4;
    const std::size_t n = 1 + rng.below(60);
    const Coord grid = t % 2 ? 6 : 500;
    std::vector<Coord> keys(n * dim);
    for (Coord& c : keys) c = rng.uniform_int(0, grid - 1);
    std::vector<std::unique_ptr<rangeindex::Index>> idx;
    for (IndexKind kind : kKinds) idx.push_back(rangeindex::build(kind, dim, keys));
    std::vector<WeightValue> cur(n, 0);
    for (int step = 0; step < 50; ++step) {
      if (rng.below(2)) {
        const auto id = static_cast<std::uint32_t>(rng.below(n));
        cur[id] += static_cast<WeightValue>(rng.below(5));
        for (auto& i : idx) i->update(id, cur[id]);
      } else {
        std::vector<Coord> bound(dim);
        std::vector<char> strict(dim);
        for (std::size_t k = 0; k < dim; ++k) {
          bound[k] = rng.uniform_int(-1, grid);
          strict[k] = static_cast<char>(rng.below(2));
        }
        const rangeindex::Box box{bound, strict};
        const auto a = idx[0]->query_max(box);
        s.check(a == idx[1]->query_max(box) && a == idx[2]->query_max(box), t, "index answers differ");
      }
    }
    for (auto& i : idx) s.check(i->audit(), t, "aggregate audit failed");
  }
  return s.done();
}

}  // namespace

std::vector<SuiteReport> run_all(std::size_t size_cap, std::size_t trials, std::uint64_t seed) {
  return {exact_suite(size_cap, trials, seed),   quadrant_suite(size_cap, trials, seed),
          chain_suite(size_cap, trials, seed),   oned_suite(size_cap, trials, seed),
          greedy_suite(size_cap, trials, seed),  pattern_suite(size_cap, trials, seed),
          index_suite(trials, seed)};
}

}  // namespace opmatch::selfcheck
